#ifndef BOSIM_VALIDATION_HPP
#define BOSIM_VALIDATION_HPP

#include "bosim/fock.hpp"
#include "bosim/stats.hpp"
#include "bosim/unitary.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bosim {

// Random-walk discrimination counter with a +-3*sqrt(k) acceptance band.
struct ValidationTrace {
    std::vector<int64_t> counter; // value after event k (1-based)
    std::vector<double> band;     // 3*sqrt(k)
    std::string null_tag;         // "uniform" | "distinguishable"
    int64_t skipped = 0;          // degenerate events (zero rival probability)

    // The null is rejected when the counter sits above the +band for the
    // entire trailing fraction of events (persistent upward exit).
    bool rejects_null(double trailing_fraction = 0.10) const;
};

// Row-norm counter against the uniform-sampler null: per collision-free
// sample S, R(S) = prod_{i in input} (m/n) * sum_{j in S} |u_ji|^2;
// step +1 when R > 1, else -1.
ValidationTrace wk_counter(const UnitaryMatrix& u, const InputConfig& input,
                           const std::vector<SampleRecord>& samples, int threads = 1);

// Likelihood-ratio counter against the fully distinguishable null:
// L = |perm(U_{S,input})|^2 / perm(|U_{S,input}|^2) (occupancy factorials
// cancel); step +1 when L > 1, -1 when L < 1, fair seeded coin on exact ties
// (single-photon events are exact ties by construction).
ValidationTrace ck_counter(const UnitaryMatrix& u, const InputConfig& input,
                           const std::vector<SampleRecord>& samples, uint64_t tiebreak_seed = 0,
                           int threads = 1);

void save_trace_csv(const std::string& path, const ValidationTrace& trace);

// Bhattacharyya-style similarity S = (sum_i sqrt(d1_i * d2_i))^2.
double similarity(std::span<const double> d1, std::span<const double> d2);

struct SimilarityReport {
    std::vector<double> similarities;
    double mean = 0.0;
    double sd = 0.0;
    double haar_mean = 0.0; // Monte Carlo reference band (mean +- 1 sd)
    double haar_sd = 0.0;
};

void save_similarity_report(const std::string& path, const SimilarityReport& report,
                            uint64_t seed);

// Pooled |U_ij|^2 over Haar draws, rows restricted to `restricted_modes`
// (empty = all rows). The Haar marginal is Beta(1, m-1).
std::vector<double> haar_moduli_pool(int m, int n_matrices, uint64_t seed,
                                     const std::vector<int>& restricted_modes = {});

// Pairwise similarities between the listed columns of one matrix, each column
// restricted to `restricted_modes` and renormalized.
std::vector<double> column_similarities(const ComplexMatrix& u, const std::vector<int>& columns,
                                        const std::vector<int>& restricted_modes = {});

// Similarity of the same column under two settings of one device: for each
// listed column, compares |a(:,c)|^2 against |b(:,c)|^2 restricted to
// `restricted_modes` and renormalized. Two power draws that barely
// reconfigure the device give values near 1; full reconfiguration drives
// them down to the independent-column (Haar) level.
std::vector<double> cross_column_similarities(const ComplexMatrix& a, const ComplexMatrix& b,
                                              const std::vector<int>& columns,
                                              const std::vector<int>& restricted_modes = {});

// Two-photon collision-free output distribution for an input pair, restricted
// and renormalized; outcomes ordered (j1 < j2) lexicographically.
std::vector<double> two_photon_distribution(const ComplexMatrix& u, int i1, int i2,
                                            const std::vector<int>& restricted_modes = {});

// Haar Monte Carlo references (means and spreads of the same statistics).
SimilarityReport haar_column_report(int m, int n_matrices, uint64_t seed, int n_columns,
                                    const std::vector<int>& restricted_modes = {});
SimilarityReport haar_two_photon_report(int m, int n_matrices, uint64_t seed, int n_input_pairs,
                                        const std::vector<int>& restricted_modes = {});

} // namespace bosim

#endif
