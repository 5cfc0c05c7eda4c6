#pragma once

#include <functional>
#include <vector>

namespace acfleet {

struct KsResult {
    double statistic = 0.0;  ///< sup |F_n - F|
    double p_value = 1.0;    ///< asymptotic Kolmogorov tail probability
    std::size_t n = 0;
};

/// One-sample two-sided Kolmogorov–Smirnov test against a continuous CDF.
/// Sorts a copy of `samples`. Throws std::invalid_argument if empty.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Kolmogorov distribution tail Q(λ) = 2 Σ_{k>=1} (-1)^{k-1} exp(-2 k² λ²).
double kolmogorov_tail(double lambda);

double exponential_cdf(double x, double rate);
double laplace_cdf(double x, double scale);

double mean(const std::vector<double>& xs);
/// Sample standard deviation (n - 1 denominator).
double stddev(const std::vector<double>& xs);

}  // namespace acfleet
