#pragma once

#include "bosim/bitstream.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bosim {

// Outcome of one statistical test: p-value(s) plus verdict at the suite threshold.
// A skipped test (stream below the test's length minimum) never counts as passed.
struct TestResult {
    std::string name;
    std::vector<double> p_values;
    bool pass = false;
    bool skipped = false;
};

// Individual tests. Each returns a p-value and can be called directly with
// explicit parameters on short inputs; nist_suite applies the standard
// parameterization and length minima.
double nist_monobit(const std::vector<uint8_t>& bits);
double nist_block_frequency(const std::vector<uint8_t>& bits, int block_len);
double nist_runs(const std::vector<uint8_t>& bits);
double nist_longest_run(const std::vector<uint8_t>& bits);
double nist_rank(const std::vector<uint8_t>& bits);
double nist_dft(const std::vector<uint8_t>& bits);
double nist_non_overlapping(const std::vector<uint8_t>& bits,
                            const std::vector<uint8_t>& tmpl, int n_blocks);
double nist_overlapping(const std::vector<uint8_t>& bits);
// Maurer statistic f_n alone (mean log2 gap between block recurrences).
double nist_universal_fn(const std::vector<uint8_t>& bits, int block_len, int init_blocks);
double nist_universal(const std::vector<uint8_t>& bits, int block_len, int init_blocks);
double nist_universal(const std::vector<uint8_t>& bits);
double nist_linear_complexity(const std::vector<uint8_t>& bits, int block_len);
std::pair<double, double> nist_serial(const std::vector<uint8_t>& bits, int m);
double nist_approximate_entropy(const std::vector<uint8_t>& bits, int m);
double nist_cusum(const std::vector<uint8_t>& bits, bool forward);

// Shortest LFSR length generating the bit sequence.
int berlekamp_massey(const uint8_t* bits, int n);
// Rank of a binary matrix over GF(2); rows packed LSB-first into 32-bit words.
int gf2_rank(std::vector<uint32_t> rows, int n_cols);
// Probability that a uniformly random n_rows x n_cols binary matrix has rank r.
double rank_distribution(int r, int n_rows, int n_cols);
int longest_ones_run(const uint8_t* bits, int n);

// Runs the full 15-test battery (serial contributes two tests, cumulative
// sums contributes forward and backward) with standard parameters; tests
// whose length minimum exceeds the stream are reported skipped.
std::vector<TestResult> nist_suite(const BitStream& stream, double p_th);

void save_nist_report(const std::string& path, const std::vector<TestResult>& results);
std::vector<TestResult> load_nist_report(const std::string& path);

} // namespace bosim
