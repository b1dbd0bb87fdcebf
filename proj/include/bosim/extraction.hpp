#pragma once

#include "bosim/bitstream.hpp"
#include "bosim/nist.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bosim {

// Stage-by-stage account of one extraction run: occupancy bits in, debiased
// bits, entropy estimate, conditioned output, and the test battery verdicts.
struct ExtractionReport {
    int64_t trials = 0;
    int m = 0;
    int64_t raw_length = 0;
    int64_t vn_length = 0;
    int64_t hashed_length = 0;
    int h_min_block = 8;
    double h_min = 0.0;
    int64_t hash_block_len = 0;
    double bits_per_trial = 0.0;
    double p_th = 0.01;
    std::vector<TestResult> nist;
    bool all_computed_pass = false;
};

struct ExtractionOutput {
    BitStream vn;
    BitStream hashed;
    ExtractionReport report;
};

// Per-mode debiasing of the occupancy columns (parallel across modes),
// concatenation in ascending mode order, min-entropy estimate at the given
// block size, SHA-256 conditioning, then the statistical test battery.
ExtractionOutput run_extraction(const BitMatrix& occupancy, int h_min_block, double p_th,
                                int threads);
ExtractionOutput run_extraction(const std::vector<SampleRecord>& samples, int m, int h_min_block,
                                double p_th, int threads);

void save_extraction_report(const std::string& path, const ExtractionReport& report);

} // namespace bosim
