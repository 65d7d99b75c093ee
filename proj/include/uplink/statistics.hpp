#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace uplink::stats {

// Two-sided standard-normal quantile for a confidence level, e.g. 0.99 -> 2.5758.
double z_for_confidence(double confidence);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Normal-approximation interval p_hat -/+ z sqrt(p_hat (1 - p_hat) / n),
// clipped to [0, 1].
Interval normal_interval(double p_hat, long n, double confidence);
// Wilson score interval.
Interval wilson_interval(double p_hat, long n, double confidence);

// sup |F_n - F| for a sample against a continuous CDF. Sorts a copy.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);
// sup |F_n - G_m| between two samples.
double ks_distance_two_sample(std::span<const double> a, std::span<const double> b);
// Asymptotic Kolmogorov tail P[K > x].
double kolmogorov_survival(double x);
// p-value of the two-sample test with the usual effective-size correction.
double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b);

// Upper tail of the chi-square distribution.
double chi_square_pvalue(double statistic, double dof);

}  // namespace uplink::stats
