#include "bosim/nist.hpp"
#include "bosim/error.hpp"
#include "bosim/stats.hpp"

#include <fftw3.h>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <mutex>
#include <numeric>

namespace bosim {

namespace {

double phi_normal(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

double nist_monobit(const std::vector<uint8_t>& bits) {
    require(!bits.empty(), ErrorCode::insufficient_data, "monobit: empty stream");
    int64_t s = 0;
    for (uint8_t b : bits) s += b ? 1 : -1;
    const double s_obs = std::abs(static_cast<double>(s)) / std::sqrt(static_cast<double>(bits.size()));
    return std::erfc(s_obs / std::sqrt(2.0));
}

double nist_block_frequency(const std::vector<uint8_t>& bits, int block_len) {
    require(block_len >= 1, ErrorCode::invalid_shape, "block_frequency: block_len must be positive");
    const size_t n_blocks = bits.size() / static_cast<size_t>(block_len);
    require(n_blocks >= 1, ErrorCode::insufficient_data, "block_frequency: no complete block");
    double chi2 = 0.0;
    for (size_t b = 0; b < n_blocks; ++b) {
        int ones = 0;
        for (int k = 0; k < block_len; ++k) ones += bits[b * block_len + k];
        const double pi = static_cast<double>(ones) / block_len;
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * block_len;
    return gamma_q(static_cast<double>(n_blocks) / 2.0, chi2 / 2.0);
}

double nist_runs(const std::vector<uint8_t>& bits) {
    const size_t n = bits.size();
    require(n >= 2, ErrorCode::insufficient_data, "runs: stream too short");
    const double pi = static_cast<double>(std::accumulate(bits.begin(), bits.end(), int64_t{0})) / n;
    const double tau = 2.0 / std::sqrt(static_cast<double>(n));
    if (std::abs(pi - 0.5) >= tau) return 0.0;
    int64_t v = 1;
    for (size_t k = 0; k + 1 < n; ++k)
        if (bits[k] != bits[k + 1]) ++v;
    const double num = std::abs(v - 2.0 * n * pi * (1.0 - pi));
    const double den = 2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi);
    return std::erfc(num / den);
}

int longest_ones_run(const uint8_t* bits, int n) {
    int best = 0, cur = 0;
    for (int i = 0; i < n; ++i) {
        cur = bits[i] ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    return best;
}

double nist_longest_run(const std::vector<uint8_t>& bits) {
    const size_t n = bits.size();
    require(n >= 128, ErrorCode::insufficient_data, "longest_run: need at least 128 bits");
    int block_len = 0, k = 0, lo = 0;
    std::vector<double> pi;
    if (n < 6272) {
        block_len = 8;
        k = 3;
        lo = 1;
        pi = {0.2148, 0.3672, 0.2305, 0.1875};
    } else if (n < 750000) {
        block_len = 128;
        k = 5;
        lo = 4;
        pi = {0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124};
    } else {
        block_len = 10000;
        k = 6;
        lo = 10;
        pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
    }
    const size_t n_blocks = n / static_cast<size_t>(block_len);
    std::vector<int64_t> nu(static_cast<size_t>(k) + 1, 0);
    for (size_t b = 0; b < n_blocks; ++b) {
        const int run = longest_ones_run(bits.data() + b * block_len, block_len);
        const int cls = std::clamp(run - lo, 0, k);
        ++nu[cls];
    }
    double chi2 = 0.0;
    for (int c = 0; c <= k; ++c) {
        const double expect = static_cast<double>(n_blocks) * pi[c];
        chi2 += (nu[c] - expect) * (nu[c] - expect) / expect;
    }
    return gamma_q(k / 2.0, chi2 / 2.0);
}

int gf2_rank(std::vector<uint32_t> rows, int n_cols) {
    require(n_cols >= 1 && n_cols <= 32, ErrorCode::invalid_shape, "gf2_rank: n_cols must be 1..32");
    int rank = 0;
    const int n_rows = static_cast<int>(rows.size());
    for (int col = n_cols - 1; col >= 0 && rank < n_rows; --col) {
        const uint32_t mask = 1u << col;
        int pivot = -1;
        for (int r = rank; r < n_rows; ++r)
            if (rows[r] & mask) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < n_rows; ++r)
            if (r != rank && (rows[r] & mask)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank;
}

double rank_distribution(int r, int n_rows, int n_cols) {
    require(r >= 0 && r <= std::min(n_rows, n_cols), ErrorCode::invalid_shape,
            "rank_distribution: rank out of range");
    double p = std::pow(2.0, static_cast<double>(r) * (n_rows + n_cols - r) -
                                 static_cast<double>(n_rows) * n_cols);
    for (int i = 0; i < r; ++i)
        p *= (1.0 - std::ldexp(1.0, i - n_rows)) * (1.0 - std::ldexp(1.0, i - n_cols)) /
             (1.0 - std::ldexp(1.0, i - r));
    return p;
}

double nist_rank(const std::vector<uint8_t>& bits) {
    constexpr int dim = 32;
    const size_t n_mat = bits.size() / (dim * dim);
    require(n_mat >= 1, ErrorCode::insufficient_data, "rank: need at least one 32x32 matrix");
    int64_t f_full = 0, f_one_less = 0;
    std::vector<uint32_t> rows(dim);
    for (size_t t = 0; t < n_mat; ++t) {
        const uint8_t* base = bits.data() + t * dim * dim;
        for (int r = 0; r < dim; ++r) {
            uint32_t w = 0;
            for (int c = 0; c < dim; ++c) w |= static_cast<uint32_t>(base[r * dim + c]) << c;
            rows[r] = w;
        }
        const int rk = gf2_rank(rows, dim);
        if (rk == dim) ++f_full;
        else if (rk == dim - 1) ++f_one_less;
    }
    const double p_full = rank_distribution(dim, dim, dim);
    const double p_one_less = rank_distribution(dim - 1, dim, dim);
    const double p_rest = 1.0 - p_full - p_one_less;
    const double n = static_cast<double>(n_mat);
    const double rest = n - f_full - f_one_less;
    const double chi2 = (f_full - n * p_full) * (f_full - n * p_full) / (n * p_full) +
                        (f_one_less - n * p_one_less) * (f_one_less - n * p_one_less) / (n * p_one_less) +
                        (rest - n * p_rest) * (rest - n * p_rest) / (n * p_rest);
    return gamma_q(1.0, chi2 / 2.0);
}

double nist_dft(const std::vector<uint8_t>& bits) {
    const size_t n = bits.size();
    require(n >= 2, ErrorCode::insufficient_data, "dft: stream too short");
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = bits[i] ? 1.0 : -1.0;
    std::vector<double> mod(n / 2);
    {
        std::vector<std::complex<double>> out(n / 2 + 1);
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), x.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(fftw_mutex());
            fftw_destroy_plan(plan);
        }
        for (size_t k = 0; k < n / 2; ++k) mod[k] = std::abs(out[k]);
    }
    const double threshold = std::sqrt(std::log(1.0 / 0.05) * n);
    const double n0 = 0.95 * n / 2.0;
    double n1 = 0.0;
    for (double m : mod)
        if (m < threshold) n1 += 1.0;
    const double d = (n1 - n0) / std::sqrt(n * 0.95 * 0.05 / 4.0);
    return std::erfc(std::abs(d) / std::sqrt(2.0));
}

double nist_non_overlapping(const std::vector<uint8_t>& bits,
                            const std::vector<uint8_t>& tmpl, int n_blocks) {
    const int m = static_cast<int>(tmpl.size());
    require(m >= 2, ErrorCode::invalid_shape, "non_overlapping: template too short");
    require(n_blocks >= 1, ErrorCode::invalid_shape, "non_overlapping: need at least one block");
    const size_t block_len = bits.size() / static_cast<size_t>(n_blocks);
    require(block_len > static_cast<size_t>(m), ErrorCode::insufficient_data,
            "non_overlapping: blocks shorter than template");
    const double mu = static_cast<double>(block_len - m + 1) / std::ldexp(1.0, m);
    const double var = static_cast<double>(block_len) *
                       (1.0 / std::ldexp(1.0, m) -
                        (2.0 * m - 1.0) / std::ldexp(1.0, 2 * m));
    double chi2 = 0.0;
    for (int b = 0; b < n_blocks; ++b) {
        const uint8_t* base = bits.data() + static_cast<size_t>(b) * block_len;
        int64_t w = 0;
        size_t j = 0;
        while (j + m <= block_len) {
            if (std::equal(tmpl.begin(), tmpl.end(), base + j)) {
                ++w;
                j += m;
            } else {
                ++j;
            }
        }
        chi2 += (w - mu) * (w - mu) / var;
    }
    return gamma_q(n_blocks / 2.0, chi2 / 2.0);
}

double nist_overlapping(const std::vector<uint8_t>& bits) {
    constexpr int m = 9;
    constexpr int block_len = 1032;
    constexpr int k = 5;
    // Class probabilities for lambda = (block_len - m + 1) / 2^m = 2.
    static const double pi[k + 1] = {0.364091, 0.185659, 0.139381, 0.100571, 0.070432, 0.139865};
    const size_t n_blocks = bits.size() / block_len;
    require(n_blocks >= 1, ErrorCode::insufficient_data, "overlapping: no complete block");
    std::vector<int64_t> nu(k + 1, 0);
    for (size_t b = 0; b < n_blocks; ++b) {
        const uint8_t* base = bits.data() + b * block_len;
        int count = 0;
        for (int j = 0; j + m <= block_len; ++j) {
            bool hit = true;
            for (int t = 0; t < m; ++t)
                if (!base[j + t]) {
                    hit = false;
                    break;
                }
            if (hit) ++count;
        }
        ++nu[std::min(count, k)];
    }
    double chi2 = 0.0;
    for (int c = 0; c <= k; ++c) {
        const double expect = static_cast<double>(n_blocks) * pi[c];
        chi2 += (nu[c] - expect) * (nu[c] - expect) / expect;
    }
    return gamma_q(k / 2.0, chi2 / 2.0);
}

namespace {

// Maurer test constants for block lengths 1..16.
const double kUniversalExpected[17] = {0.0,       0.7326495, 1.5374383, 2.4016068, 3.3112247,
                                       4.2534266, 5.2177052, 6.1962507, 7.1836656, 8.1764248,
                                       9.1723243, 10.170032, 11.168765, 12.168070, 13.167693,
                                       14.167488, 15.167379};
const double kUniversalVariance[17] = {0.0,   0.690, 1.338, 1.901, 2.358, 2.705, 2.954, 3.125, 3.238,
                                       3.311, 3.356, 3.384, 3.401, 3.410, 3.416, 3.419, 3.421};

} // namespace

double nist_universal_fn(const std::vector<uint8_t>& bits, int block_len, int init_blocks) {
    require(block_len >= 1 && block_len <= 16, ErrorCode::invalid_shape,
            "universal: block_len must be 1..16");
    require(init_blocks >= 1, ErrorCode::invalid_shape, "universal: init_blocks must be positive");
    const int64_t total = static_cast<int64_t>(bits.size()) / block_len;
    const int64_t test_blocks = total - init_blocks;
    require(test_blocks >= 1, ErrorCode::insufficient_data,
            "universal: not enough blocks after initialization");
    std::vector<int64_t> last(size_t{1} << block_len, 0);
    auto contents = [&](int64_t i) {
        uint32_t v = 0;
        for (int t = 0; t < block_len; ++t)
            v = (v << 1) | bits[static_cast<size_t>(i - 1) * block_len + t];
        return v;
    };
    for (int64_t i = 1; i <= init_blocks; ++i) last[contents(i)] = i;
    double sum = 0.0;
    for (int64_t i = init_blocks + 1; i <= total; ++i) {
        const uint32_t v = contents(i);
        sum += std::log2(static_cast<double>(i - last[v]));
        last[v] = i;
    }
    return sum / static_cast<double>(test_blocks);
}

double nist_universal(const std::vector<uint8_t>& bits, int block_len, int init_blocks) {
    const double fn = nist_universal_fn(bits, block_len, init_blocks);
    const int64_t k = static_cast<int64_t>(bits.size()) / block_len - init_blocks;
    const double c = 0.7 - 0.8 / block_len +
                     (4.0 + 32.0 / block_len) * std::pow(static_cast<double>(k), -3.0 / block_len) / 15.0;
    const double sigma = c * std::sqrt(kUniversalVariance[block_len] / static_cast<double>(k));
    return std::erfc(std::abs(fn - kUniversalExpected[block_len]) / (std::sqrt(2.0) * sigma));
}

double nist_universal(const std::vector<uint8_t>& bits) {
    const size_t n = bits.size();
    require(n >= 387840, ErrorCode::insufficient_data, "universal: need at least 387840 bits");
    int block_len = 6;
    if (n >= 904960) block_len = 7;
    if (n >= 2068480) block_len = 8;
    if (n >= 4654080) block_len = 9;
    if (n >= 10342400) block_len = 10;
    if (n >= 22753280) block_len = 11;
    if (n >= 49643520) block_len = 12;
    if (n >= 107560960) block_len = 13;
    if (n >= 231669760) block_len = 14;
    if (n >= 496435200) block_len = 15;
    if (n >= 1059061760) block_len = 16;
    const int init_blocks = 10 * (1 << block_len);
    return nist_universal(bits, block_len, init_blocks);
}

int berlekamp_massey(const uint8_t* bits, int n) {
    require(n >= 1, ErrorCode::insufficient_data, "berlekamp_massey: empty sequence");
    const int words = n / 64 + 2;
    std::vector<uint64_t> c(words, 0), b(words, 0), t, win(words, 0);
    c[0] = 1;
    b[0] = 1;
    int l = 0, last = -1;
    auto shifted_xor = [&](std::vector<uint64_t>& dst, const std::vector<uint64_t>& src, int shift) {
        const int ws = shift >> 6, bs = shift & 63;
        if (bs == 0) {
            for (int w = words - 1; w >= ws; --w) dst[w] ^= src[w - ws];
        } else {
            for (int w = words - 1; w >= ws; --w) {
                uint64_t v = src[w - ws] << bs;
                if (w - ws - 1 >= 0) v |= src[w - ws - 1] >> (64 - bs);
                dst[w] ^= v;
            }
        }
    };
    for (int i = 0; i < n; ++i) {
        // win holds bit k = s[i-k]; advance so bit 0 becomes s[i].
        for (int w = words - 1; w > 0; --w) win[w] = (win[w] << 1) | (win[w - 1] >> 63);
        win[0] = (win[0] << 1) | bits[i];
        uint64_t acc = 0;
        for (int w = 0; w <= l / 64; ++w) acc ^= c[w] & win[w];
        const int d = std::popcount(acc) & 1;
        if (d) {
            t = c;
            shifted_xor(c, b, i - last);
            if (2 * l <= i) {
                l = i + 1 - l;
                last = i;
                b = t;
            }
        }
    }
    return l;
}

double nist_linear_complexity(const std::vector<uint8_t>& bits, int block_len) {
    require(block_len >= 4, ErrorCode::invalid_shape, "linear_complexity: block_len too small");
    const size_t n_blocks = bits.size() / static_cast<size_t>(block_len);
    require(n_blocks >= 1, ErrorCode::insufficient_data, "linear_complexity: no complete block");
    static const double pi[7] = {0.010417, 0.03125, 0.125, 0.5, 0.25, 0.0625, 0.020833};
    const double mu = block_len / 2.0 + (9.0 + (block_len % 2 == 0 ? -1.0 : 1.0)) / 36.0 -
                      (block_len / 3.0 + 2.0 / 9.0) / std::pow(2.0, block_len);
    const double sign = block_len % 2 == 0 ? 1.0 : -1.0;
    std::vector<int64_t> nu(7, 0);
    for (size_t b = 0; b < n_blocks; ++b) {
        const int l = berlekamp_massey(bits.data() + b * block_len, block_len);
        const double ti = sign * (l - mu) + 2.0 / 9.0;
        int cls;
        if (ti <= -2.5) cls = 0;
        else if (ti <= -1.5) cls = 1;
        else if (ti <= -0.5) cls = 2;
        else if (ti <= 0.5) cls = 3;
        else if (ti <= 1.5) cls = 4;
        else if (ti <= 2.5) cls = 5;
        else cls = 6;
        ++nu[cls];
    }
    double chi2 = 0.0;
    for (int c = 0; c < 7; ++c) {
        const double expect = static_cast<double>(n_blocks) * pi[c];
        chi2 += (nu[c] - expect) * (nu[c] - expect) / expect;
    }
    return gamma_q(3.0, chi2 / 2.0);
}

namespace {

// Circular-window statistic for the serial test; psi2(0) = 0 by convention.
double serial_psi2(const std::vector<uint8_t>& bits, int m) {
    if (m <= 0) return 0.0;
    const size_t n = bits.size();
    std::vector<int64_t> counts(size_t{1} << m, 0);
    for (size_t i = 0; i < n; ++i) {
        uint32_t v = 0;
        for (int t = 0; t < m; ++t) v = (v << 1) | bits[(i + t) % n];
        ++counts[v];
    }
    double sum = 0.0;
    for (int64_t c : counts) sum += static_cast<double>(c) * c;
    return std::ldexp(1.0, m) / static_cast<double>(n) * sum - static_cast<double>(n);
}

} // namespace

std::pair<double, double> nist_serial(const std::vector<uint8_t>& bits, int m) {
    require(m >= 2 && m <= 16, ErrorCode::invalid_shape, "serial: m must be 2..16");
    require(bits.size() > static_cast<size_t>(m), ErrorCode::insufficient_data,
            "serial: stream shorter than window");
    const double psi_m = serial_psi2(bits, m);
    const double psi_m1 = serial_psi2(bits, m - 1);
    const double psi_m2 = serial_psi2(bits, m - 2);
    const double d1 = std::max(0.0, psi_m - psi_m1);
    const double d2 = std::max(0.0, psi_m - 2.0 * psi_m1 + psi_m2);
    const double p1 = gamma_q(std::ldexp(1.0, m - 2), d1 / 2.0);
    const double p2 = gamma_q(std::ldexp(1.0, m - 3), d2 / 2.0);
    return {p1, p2};
}

double nist_approximate_entropy(const std::vector<uint8_t>& bits, int m) {
    require(m >= 1 && m <= 16, ErrorCode::invalid_shape, "approximate_entropy: m must be 1..16");
    const size_t n = bits.size();
    require(n > static_cast<size_t>(m) + 1, ErrorCode::insufficient_data,
            "approximate_entropy: stream shorter than window");
    auto phi = [&](int w) {
        std::vector<int64_t> counts(size_t{1} << w, 0);
        for (size_t i = 0; i < n; ++i) {
            uint32_t v = 0;
            for (int t = 0; t < w; ++t) v = (v << 1) | bits[(i + t) % n];
            ++counts[v];
        }
        double sum = 0.0;
        for (int64_t c : counts)
            if (c > 0) {
                const double p = static_cast<double>(c) / static_cast<double>(n);
                sum += p * std::log(p);
            }
        return sum;
    };
    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * static_cast<double>(n) * (std::log(2.0) - apen);
    return gamma_q(std::ldexp(1.0, m - 1), std::max(0.0, chi2) / 2.0);
}

double nist_cusum(const std::vector<uint8_t>& bits, bool forward) {
    const int64_t n = static_cast<int64_t>(bits.size());
    require(n >= 1, ErrorCode::insufficient_data, "cusum: empty stream");
    int64_t s = 0, z = 0;
    for (int64_t i = 0; i < n; ++i) {
        const uint8_t bit = forward ? bits[i] : bits[n - 1 - i];
        s += bit ? 1 : -1;
        z = std::max(z, std::abs(s));
    }
    const double sqrtn = std::sqrt(static_cast<double>(n));
    double sum1 = 0.0, sum2 = 0.0;
    for (int64_t k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k)
        sum1 += phi_normal((4.0 * k + 1.0) * z / sqrtn) - phi_normal((4.0 * k - 1.0) * z / sqrtn);
    for (int64_t k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k)
        sum2 += phi_normal((4.0 * k + 3.0) * z / sqrtn) - phi_normal((4.0 * k + 1.0) * z / sqrtn);
    return 1.0 - sum1 + sum2;
}

std::vector<TestResult> nist_suite(const BitStream& stream, double p_th) {
    require(p_th > 0.0 && p_th < 1.0, ErrorCode::invalid_config, "nist_suite: p_th must be in (0,1)");
    const std::vector<uint8_t>& bits = stream.bits;
    const size_t n = bits.size();
    std::vector<TestResult> results;
    auto add = [&](const std::string& name, size_t minimum, auto&& compute) {
        TestResult r;
        r.name = name;
        if (n < minimum) {
            r.skipped = true;
        } else {
            r.p_values = compute();
            r.pass = std::all_of(r.p_values.begin(), r.p_values.end(),
                                 [&](double p) { return p >= p_th; });
        }
        results.push_back(std::move(r));
    };
    auto one = [](double p) { return std::vector<double>{p}; };
    add("monobit", 100, [&] { return one(nist_monobit(bits)); });
    add("block_frequency", 128, [&] { return one(nist_block_frequency(bits, 128)); });
    add("runs", 100, [&] { return one(nist_runs(bits)); });
    add("longest_run", 128, [&] { return one(nist_longest_run(bits)); });
    add("rank", 38912, [&] { return one(nist_rank(bits)); });
    add("dft", 1000, [&] { return one(nist_dft(bits)); });
    // Block mean >= 5 template hits requires 8 * (5 * 2^9 + 8) bits.
    add("non_overlapping_template", 20544, [&] {
        const std::vector<uint8_t> tmpl = {0, 0, 0, 0, 0, 0, 0, 0, 1};
        return one(nist_non_overlapping(bits, tmpl, 8));
    });
    add("overlapping_template", 1000000, [&] { return one(nist_overlapping(bits)); });
    add("universal", 387840, [&] { return one(nist_universal(bits)); });
    add("linear_complexity", 1000000, [&] { return one(nist_linear_complexity(bits, 500)); });
    {
        TestResult r1, r2;
        r1.name = "serial_1";
        r2.name = "serial_2";
        if (n < 100) {
            r1.skipped = r2.skipped = true;
        } else {
            const auto [p1, p2] = nist_serial(bits, 2);
            r1.p_values = {p1};
            r2.p_values = {p2};
            r1.pass = p1 >= p_th;
            r2.pass = p2 >= p_th;
        }
        results.push_back(std::move(r1));
        results.push_back(std::move(r2));
    }
    add("approximate_entropy", 100, [&] { return one(nist_approximate_entropy(bits, 2)); });
    add("cusum_forward", 100, [&] { return one(nist_cusum(bits, true)); });
    add("cusum_backward", 100, [&] { return one(nist_cusum(bits, false)); });
    return results;
}

void save_nist_report(const std::string& path, const std::vector<TestResult>& results) {
    nlohmann::json j = nlohmann::json::array();
    for (const TestResult& r : results) {
        nlohmann::json e;
        e["test"] = r.name;
        e["p_values"] = r.p_values;
        e["pass"] = r.pass;
        e["skipped"] = r.skipped;
        j.push_back(std::move(e));
    }
    std::ofstream f(path);
    require(f.good(), ErrorCode::io_error, "save_nist_report: cannot open " + path);
    f << j.dump(2) << "\n";
    require(f.good(), ErrorCode::io_error, "save_nist_report: write failed");
}

std::vector<TestResult> load_nist_report(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), ErrorCode::io_error, "load_nist_report: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::io_error, std::string("load_nist_report: parse failure: ") + e.what());
    }
    std::vector<TestResult> results;
    for (const auto& e : j) {
        TestResult r;
        r.name = e.at("test").get<std::string>();
        r.p_values = e.at("p_values").get<std::vector<double>>();
        r.pass = e.at("pass").get<bool>();
        r.skipped = e.at("skipped").get<bool>();
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace bosim
