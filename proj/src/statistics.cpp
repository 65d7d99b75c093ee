#include "uplink/statistics.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "uplink/errors.hpp"

namespace uplink::stats {

double z_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw ParameterError("confidence level must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 0.5 + confidence / 2.0);
}

Interval normal_interval(double p_hat, long n, double confidence) {
  const double z = z_for_confidence(confidence);
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
  return {std::max(0.0, p_hat - half), std::min(1.0, p_hat + half)};
}

Interval wilson_interval(double p_hat, long n, double confidence) {
  const double z = z_for_confidence(confidence);
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p_hat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ParameterError("ks_distance: empty sample");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_distance_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_distance_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(std::span<const double> a, std::span<const double> b) {
  const double d = ks_distance_two_sample(a, b);
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  const double ne = std::sqrt(n * m / (n + m));
  return kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
}

double chi_square_pvalue(double statistic, double dof) {
  if (!(dof > 0.0)) throw ParameterError("chi_square_pvalue: dof must be > 0");
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> chi(dof);
  return boost::math::cdf(boost::math::complement(chi, statistic));
}

}  // namespace uplink::stats
