#ifndef BOSIM_STATS_HPP
#define BOSIM_STATS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bosim {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
};

MeanSd mean_sd(std::span<const double> values);

// Kolmogorov asymptotic survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_q(double lambda);

// One-sample KS test of `values` against a CDF; returns {statistic, p_value}.
struct KsResult {
    double statistic;
    double p_value;
};
KsResult ks_test(std::vector<double> values, const std::function<double(double)>& cdf);

// CDF of |U_ij|^2 for a column of an m x m Haar unitary: 1 - (1-x)^(m-1) on [0,1]
double haar_moduli_cdf(double x, int m);
double haar_moduli_density(double x, int m);

// Upper regularized incomplete gamma Q(a, x); the chi-squared survival function
// is chi2_sf(x, k) = Q(k/2, x/2).
double gamma_q(double a, double x);
double chi2_sf(double chi2, double dof);

// Pearson chi-squared test of observed counts against expected probabilities.
double chi2_pvalue(std::span<const size_t> observed, std::span<const double> expected_prob);

// Total variation distance between two distributions on the same support.
double total_variation(std::span<const double> p, std::span<const double> q);

struct Histogram {
    std::vector<double> edges;   // size bins + 1
    std::vector<double> density; // size bins, normalized to integrate to 1
    std::vector<size_t> counts;  // size bins
};
Histogram histogram(std::span<const double> values, int bins, double lo, double hi);

} // namespace bosim

#endif
