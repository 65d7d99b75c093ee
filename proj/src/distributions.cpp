#include "uplink/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "uplink/errors.hpp"
#include "uplink/units.hpp"

namespace uplink {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_distance(double r, const char* name) {
  if (!(r >= 0.0)) {
    std::ostringstream os;
    os << name << " must be a non-negative distance, got " << r;
    throw DomainError(os.str());
  }
}

// n * log(x) with the convention 0 * log(0) = 0.
double xlogy(double n, double x) {
  if (n == 0.0) return 0.0;
  return n * std::log(x);
}

}  // namespace

DistanceParams DistanceParams::with_default_p(double lambda, int k, int l) {
  DistanceParams d{lambda, 1.0 / k, k, l};
  d.validate();
  return d;
}

void DistanceParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("thinning probability p must be in (0, 1]");
  if (k < 1) throw ParameterError("k must be >= 1");
  if (l < 1 || l > k) throw ParameterError("l must satisfy 1 <= l <= k");
}

double interferer_link_pdf(double r_x, const DistanceParams& params) {
  require_distance(r_x, "r_x");
  const double a = params.p * params.lambda * kPi;
  return 2.0 * a * r_x * std::exp(-a * r_x * r_x);
}

double interferer_link_cdf(double r_x, const DistanceParams& params) {
  if (r_x <= 0.0) return 0.0;
  const double a = params.p * params.lambda * kPi;
  return -std::expm1(-a * r_x * r_x);
}

double log_joint_distance_pdf(double r_l, double r_k, const DistanceParams& params) {
  const int l = params.l;
  const int k = params.k;
  if (l >= k) {
    throw ParameterError("joint_distance_pdf needs l < k; use kth_nearest_pdf for l = k");
  }
  require_distance(r_l, "r_l");
  require_distance(r_k, "r_k");
  if (r_l > r_k) return kNegInf;
  const double lp = params.lambda * kPi;
  const double gap = r_k * r_k - r_l * r_l;
  if (gap <= 0.0 && k - l - 1 > 0) return kNegInf;
  return std::log(4.0) - lp * r_k * r_k + k * std::log(lp) + std::log(r_k) +
         xlogy(2.0 * l - 1.0, r_l) + xlogy(k - l - 1.0, gap) - std::lgamma(k - l) -
         std::lgamma(l);
}

double joint_distance_pdf(double r_l, double r_k, const DistanceParams& params) {
  return std::exp(log_joint_distance_pdf(r_l, r_k, params));
}

double log_kth_nearest_pdf(double r_k, int k, double lambda) {
  require_distance(r_k, "r_k");
  if (k < 1) throw ParameterError("k must be >= 1");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
  const double lp = lambda * kPi;
  return std::log(2.0) + k * std::log(lp) - std::lgamma(k) + xlogy(2.0 * k - 1.0, r_k) -
         lp * r_k * r_k;
}

double kth_nearest_pdf(double r_k, int k, double lambda) {
  return std::exp(log_kth_nearest_pdf(r_k, k, lambda));
}

double kth_nearest_cdf(double r_k, int k, double lambda) {
  if (r_k <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(k), lambda * kPi * r_k * r_k);
}

double conditional_kth_pdf(double r_k, double r_l, const DistanceParams& params) {
  const double log_joint = log_joint_distance_pdf(r_l, r_k, params);
  const double log_marginal = log_kth_nearest_pdf(r_l, params.l, params.lambda);
  if (!(log_marginal >= std::log(kConditioningFloor))) {
    std::ostringstream os;
    os << "conditional_kth_pdf: f_{R_l}(" << r_l << ") is below the conditioning floor";
    throw NumericalError(os.str());
  }
  return std::exp(log_joint - log_marginal);
}

}  // namespace uplink
