#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bosim/bitstream.hpp>
#include <bosim/error.hpp>
#include <bosim/nist.hpp>
#include <bosim/rng.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

using namespace bosim;

namespace {

std::vector<uint8_t> bits_of(const std::string& s) {
    std::vector<uint8_t> b;
    b.reserve(s.size());
    for (char c : s) b.push_back(c == '1');
    return b;
}

std::vector<uint8_t> random_bits(size_t n, uint64_t index) {
    Rng rng = Rng::substream(0xBADC0DE, StreamId::test, index);
    std::vector<uint8_t> b(n);
    for (auto& x : b) x = rng.bernoulli(0.5) ? 1 : 0;
    return b;
}

// Direct O(n^2) Fourier magnitudes: independent oracle for the fft-based
// peak-count statistic.
double dft_oracle(const std::vector<uint8_t>& bits) {
    const int n = static_cast<int>(bits.size());
    const int half = n / 2;
    const double threshold = std::sqrt(std::log(1.0 / 0.05) * n);
    int below = 0;
    for (int k = 0; k < half; ++k) {
        double re = 0.0, im = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = bits[j] ? 1.0 : -1.0;
            const double ang = 2.0 * M_PI * double(j) * double(k) / n;
            re += x * std::cos(ang);
            im -= x * std::sin(ang);
        }
        if (std::sqrt(re * re + im * im) < threshold) ++below;
    }
    const double expect = 0.95 * n / 2.0;
    const double d = (below - expect) / std::sqrt(n * 0.95 * 0.05 / 4.0);
    return std::erfc(std::abs(d) / std::sqrt(2.0));
}

// Textbook GF(2) elimination on a bool matrix: independent oracle for the
// word-packed rank routine.
int rank_oracle(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    const int rows = static_cast<int>(m.size());
    const int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c]) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = 0; r < rows; ++r)
            if (r != rank && m[r][c])
                for (int cc = 0; cc < cols; ++cc) m[r][cc] ^= m[rank][cc];
        ++rank;
    }
    return rank;
}

// Does an LFSR with the given taps reproduce the sequence from its own prefix?
bool lfsr_generates(const std::vector<uint8_t>& seq, const std::vector<int>& taps, int L) {
    for (size_t i = L; i < seq.size(); ++i) {
        int acc = 0;
        for (int t = 0; t < L; ++t)
            if (taps[t]) acc ^= seq[i - 1 - t];
        if (acc != seq[i]) return false;
    }
    return true;
}

// Smallest L such that some length-L LFSR generates the sequence, by
// exhaustive tap search. Independent minimality oracle.
int lfsr_oracle(const std::vector<uint8_t>& seq) {
    const int n = static_cast<int>(seq.size());
    for (int L = 0; L <= n; ++L) {
        const uint64_t combos = uint64_t{1} << L;
        for (uint64_t mask = 0; mask < combos; ++mask) {
            std::vector<int> taps(L);
            for (int t = 0; t < L; ++t) taps[t] = (mask >> t) & 1;
            if (lfsr_generates(seq, taps, L)) return L;
        }
    }
    return n;
}

} // namespace

TEST_SUITE("reference vectors") {

TEST_CASE("frequency family") {
    CHECK(nist_monobit(bits_of("1011010101")) == doctest::Approx(0.527089).epsilon(1e-4));
    CHECK(nist_block_frequency(bits_of("0110011010"), 3) ==
          doctest::Approx(0.801252).epsilon(1e-4));
    CHECK(nist_runs(bits_of("1001101011")) == doctest::Approx(0.147232).epsilon(1e-4));
}

TEST_CASE("longest run of ones in 128 bits") {
    std::string e =
        "11001100000101010110110001001100111000000000001001"
        "00110101010001000100111101011010000000110101111100"
        "1100111001101101100010110010";
    CHECK(nist_longest_run(bits_of(e)) == doctest::Approx(0.180598).epsilon(1e-4));
    const uint8_t ones[] = {1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 0};
    CHECK(longest_ones_run(ones, 15) == 4);
    CHECK(longest_ones_run(ones, 0) == 0);
}

TEST_CASE("spectral peak counting") {
    auto e = bits_of("1001010011");
    double p = nist_dft(e);
    CHECK(p == doctest::Approx(0.468160).epsilon(1e-4));
    CHECK(p == doctest::Approx(dft_oracle(e)).epsilon(1e-9));
}

TEST_CASE("template and pattern family") {
    CHECK(nist_non_overlapping(bits_of("10100100101110010110"), bits_of("001"), 2) ==
          doctest::Approx(0.344154).epsilon(1e-4));
    auto [p1, p2] = nist_serial(bits_of("0011011101"), 3);
    CHECK(p1 == doctest::Approx(0.808792).epsilon(1e-4));
    CHECK(p2 == doctest::Approx(0.670320).epsilon(1e-4));
    CHECK(nist_approximate_entropy(bits_of("0100110101"), 3) ==
          doctest::Approx(0.261961).epsilon(1e-4));
}

TEST_CASE("cumulative sums both directions") {
    CHECK(nist_cusum(bits_of("1011010111"), true) == doctest::Approx(0.411659).epsilon(1e-4));
    CHECK(nist_cusum(bits_of("1011010111"), false) == doctest::Approx(0.411659).epsilon(1e-4));
}

TEST_CASE("compressibility statistic on a short stream") {
    // f_n for L=2, Q=4 over the 20-bit example; the p-value mapping is only
    // calibrated for the standard parameter table, so the statistic itself is
    // the anchor here
    CHECK(nist_universal_fn(bits_of("01011010011101010111"), 2, 4) ==
          doctest::Approx(1.1949875).epsilon(1e-6));
}

TEST_CASE("shortest lfsr length") {
    auto seq = bits_of("1101011110001");
    CHECK(berlekamp_massey(seq.data(), static_cast<int>(seq.size())) == 4);
}

TEST_CASE("binary rank law at full size") {
    CHECK(rank_distribution(32, 32, 32) == doctest::Approx(0.288788).epsilon(1e-5));
    CHECK(rank_distribution(31, 32, 32) == doctest::Approx(0.577576).epsilon(1e-5));
    CHECK(rank_distribution(30, 32, 32) == doctest::Approx(0.128350).epsilon(1e-5));
    // the law is a distribution
    double total = 0;
    for (int r = 0; r <= 4; ++r) total += rank_distribution(r, 4, 4);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

}

TEST_SUITE("independent oracles") {

TEST_CASE("spectral statistic matches the direct fourier sum") {
    for (size_t n : {10, 33, 64, 100, 257, 500}) {
        for (uint64_t k = 0; k < 3; ++k) {
            auto b = random_bits(n, 100 * n + k);
            CHECK(nist_dft(b) == doctest::Approx(dft_oracle(b)).epsilon(1e-9));
        }
    }
}

TEST_CASE("word-packed rank matches boolean elimination") {
    Rng rng = Rng::substream(515, StreamId::test, 0);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 12;
        std::vector<uint32_t> packed(n, 0);
        std::vector<std::vector<int>> dense(n, std::vector<int>(n, 0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                int bit = rng.bernoulli(0.5);
                dense[r][c] = bit;
                if (bit) packed[r] |= uint32_t{1} << c;
            }
        CHECK(gf2_rank(packed, n) == rank_oracle(dense));
    }
    // structured cases
    std::vector<uint32_t> id(8);
    for (int r = 0; r < 8; ++r) id[r] = uint32_t{1} << r;
    CHECK(gf2_rank(id, 8) == 8);
    CHECK(gf2_rank(std::vector<uint32_t>(8, 0), 8) == 0);
    CHECK(gf2_rank(std::vector<uint32_t>(8, 0b1011), 8) == 1);
}

TEST_CASE("rank law matches monte carlo at 4x4") {
    Rng rng = Rng::substream(516, StreamId::test, 0);
    const int trials = 20000;
    std::map<int, int> counts;
    for (int t = 0; t < trials; ++t) {
        std::vector<uint32_t> rows(4, 0);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (rng.bernoulli(0.5)) rows[r] |= uint32_t{1} << c;
        ++counts[gf2_rank(rows, 4)];
    }
    for (int r = 2; r <= 4; ++r) {
        double expect = rank_distribution(r, 4, 4);
        double got = counts[r] / double(trials);
        double sigma = std::sqrt(expect * (1 - expect) / trials);
        CHECK(std::abs(got - expect) < 4.0 * sigma + 1e-4);
    }
}

TEST_CASE("lfsr length is minimal by exhaustive tap search") {
    // edge cases
    std::vector<uint8_t> zeros(12, 0);
    CHECK(berlekamp_massey(zeros.data(), 12) == 0);
    auto late_one = bits_of("0001");
    CHECK(berlekamp_massey(late_one.data(), 4) == 4);
    auto alt = bits_of("0101010101010101");
    CHECK(berlekamp_massey(alt.data(), 16) == lfsr_oracle(alt));
    // random sequences
    for (uint64_t k = 0; k < 12; ++k) {
        auto seq = random_bits(16, 900 + k);
        CHECK(berlekamp_massey(seq.data(), 16) == lfsr_oracle(seq));
    }
}

}

TEST_SUITE("degenerate inputs") {

TEST_CASE("constant and alternating streams are decisively rejected") {
    std::vector<uint8_t> zeros(256, 0);
    CHECK(nist_monobit(zeros) < 1e-10);
    std::vector<uint8_t> alt(256);
    for (size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
    CHECK(nist_monobit(alt) > 0.9); // perfectly balanced
    CHECK(nist_runs(alt) < 1e-10);  // but maximally oscillating
    CHECK(nist_cusum(zeros, true) < 1e-10);
}

}

TEST_SUITE("suite orchestration") {

TEST_CASE("roster names and order") {
    BitStream s;
    s.bits = random_bits(1200, 3);
    auto results = nist_suite(s, 0.01);
    std::vector<std::string> names;
    for (const auto& r : results) names.push_back(r.name);
    std::vector<std::string> expect{
        "monobit",      "block_frequency",          "runs",
        "longest_run",  "rank",                     "dft",
        "non_overlapping_template",                 "overlapping_template",
        "universal",    "linear_complexity",        "serial_1",
        "serial_2",     "approximate_entropy",      "cusum_forward",
        "cusum_backward"};
    CHECK(names == expect);
    CHECK(results.size() == 15);
}

TEST_CASE("length minima mark short streams skipped, never passed") {
    BitStream s;
    s.bits = random_bits(500, 4);
    auto results = nist_suite(s, 0.01);
    std::map<std::string, TestResult> by_name;
    for (const auto& r : results) by_name[r.name] = r;
    for (const char* name : {"rank", "dft", "non_overlapping_template", "overlapping_template",
                             "universal", "linear_complexity"}) {
        CHECK(by_name[name].skipped);
        CHECK(!by_name[name].pass);
        CHECK(by_name[name].p_values.empty());
    }
    for (const char* name : {"monobit", "block_frequency", "runs", "longest_run", "serial_1",
                             "serial_2", "approximate_entropy", "cusum_forward",
                             "cusum_backward"}) {
        CHECK(!by_name[name].skipped);
        CHECK(!by_name[name].p_values.empty());
    }
    CHECK_THROWS_AS(nist_suite(s, 0.0), Error);
    CHECK_THROWS_AS(nist_suite(s, 1.0), Error);
}

TEST_CASE("report json round-trips") {
    BitStream s;
    s.bits = random_bits(1500, 5);
    auto results = nist_suite(s, 0.01);
    auto path = std::filesystem::temp_directory_path() / "bosim_test_nist.json";
    save_nist_report(path.string(), results);
    auto back = load_nist_report(path.string());
    REQUIRE(back.size() == results.size());
    for (size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].name == results[i].name);
        CHECK(back[i].pass == results[i].pass);
        CHECK(back[i].skipped == results[i].skipped);
        REQUIRE(back[i].p_values.size() == results[i].p_values.size());
        for (size_t j = 0; j < back[i].p_values.size(); ++j)
            CHECK(back[i].p_values[j] == doctest::Approx(results[i].p_values[j]).epsilon(1e-12));
    }
    std::filesystem::remove(path);
}

TEST_CASE("p-values are uniform across disjoint uniform streams") {
    // 100 disjoint 10^6-bit streams from the pinned generator: each of the 15
    // tests must pass at the 0.01 threshold on at least 96 of them
    const int n_streams = 100;
    const size_t len = 1000000;
    std::map<std::string, int> passes;
    for (int k = 0; k < n_streams; ++k) {
        BitStream s;
        s.bits = random_bits(len, 10000 + k);
        auto results = nist_suite(s, 0.01);
        for (const auto& r : results) {
            REQUIRE(!r.skipped);
            if (r.pass) ++passes[r.name];
        }
    }
    REQUIRE(passes.size() <= 15);
    for (const auto& [name, n_pass] : passes) {
        INFO(name << " passed " << n_pass << "/100");
        CHECK(n_pass >= 96);
    }
    // every test must appear (nothing can pass zero times silently)
    CHECK(passes.size() == 15);
}

}
