#include "bosim/stats.hpp"
#include "bosim/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace bosim {

MeanSd mean_sd(std::span<const double> values) {
    MeanSd out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return out;
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> values, const std::function<double(double)>& cdf) {
    require(!values.empty(), ErrorCode::insufficient_data, "ks_test: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double sqrt_n = std::sqrt(n);
    const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    return {d, kolmogorov_q(lambda)};
}

double haar_moduli_cdf(double x, int m) {
    require(m >= 2, ErrorCode::invalid_dimension, "haar_moduli_cdf: need m >= 2");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - x, m - 1);
}

double haar_moduli_density(double x, int m) {
    require(m >= 2, ErrorCode::invalid_dimension, "haar_moduli_density: need m >= 2");
    if (x < 0.0 || x > 1.0) return 0.0;
    return (m - 1) * std::pow(1.0 - x, m - 2);
}

double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(a, x);
}

double chi2_sf(double chi2, double dof) {
    return gamma_q(dof / 2.0, chi2 / 2.0);
}

double chi2_pvalue(std::span<const size_t> observed, std::span<const double> expected_prob) {
    require(observed.size() == expected_prob.size(), ErrorCode::shape_mismatch,
            "chi2_pvalue: observed/expected size mismatch");
    require(!observed.empty(), ErrorCode::insufficient_data, "chi2_pvalue: empty tables");
    size_t total = 0;
    for (size_t c : observed) total += c;
    require(total > 0, ErrorCode::insufficient_data, "chi2_pvalue: zero total count");
    double chi2 = 0.0;
    size_t dof = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_prob[i] * static_cast<double>(total);
        if (e <= 0.0) {
            require(observed[i] == 0, ErrorCode::invalid_distribution,
                    "chi2_pvalue: observed count in zero-probability cell");
            continue;
        }
        const double d = static_cast<double>(observed[i]) - e;
        chi2 += d * d / e;
        ++dof;
    }
    require(dof >= 2, ErrorCode::insufficient_data, "chi2_pvalue: fewer than 2 support cells");
    return chi2_sf(chi2, static_cast<double>(dof - 1));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    require(p.size() == q.size(), ErrorCode::shape_mismatch, "total_variation: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

Histogram histogram(std::span<const double> values, int bins, double lo, double hi) {
    require(bins > 0, ErrorCode::invalid_shape, "histogram: bins must be positive");
    require(hi > lo, ErrorCode::invalid_shape, "histogram: hi must exceed lo");
    Histogram h;
    h.edges.resize(bins + 1);
    h.counts.assign(bins, 0);
    h.density.assign(bins, 0.0);
    const double w = (hi - lo) / bins;
    for (int i = 0; i <= bins; ++i) h.edges[i] = lo + w * i;
    size_t inside = 0;
    for (double v : values) {
        if (v < lo || v > hi) continue;
        int b = static_cast<int>((v - lo) / w);
        if (b == bins) b = bins - 1; // right edge inclusive
        ++h.counts[b];
        ++inside;
    }
    if (inside > 0) {
        for (int i = 0; i < bins; ++i)
            h.density[i] = static_cast<double>(h.counts[i]) / (static_cast<double>(inside) * w);
    }
    return h;
}

} // namespace bosim
