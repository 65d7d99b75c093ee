#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include "uplink/analytic.hpp"
#include "uplink/errors.hpp"
#include "uplink/units.hpp"

namespace uplink {

namespace {

constexpr double kLogWLo = -10.0 * 2.302585092994046;  // ln(1e-10)
constexpr double kLogWHi = 16.0 * 2.302585092994046;   // ln(1e16)
constexpr double kStep = 1.0 / 32.0;

quad::QuadratureSpec kernel_spec(const quad::QuadratureSpec& spec) {
  quad::QuadratureSpec s;
  s.abs_tol = 1e-300;
  s.rel_tol = std::min(spec.rel_tol * 1e-3, 1e-10);
  s.max_subdivisions = std::max(spec.max_subdivisions, 200);
  return s;
}

}  // namespace

InterferenceKernel::InterferenceKernel(double alpha, double epsilon, const quad::QuadratureSpec& spec)
    : alpha_(alpha),
      epsilon_(epsilon),
      beta_(alpha * epsilon / 2.0),
      delta_(2.0 / alpha),
      spec_(kernel_spec(spec)),
      log_w_lo_(kLogWLo),
      step_(kStep) {
  if (!(alpha > 2.0)) throw ParameterError("path-loss exponent alpha must be > 2");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in [0, 1]");
  spec.validate();

  const auto n = static_cast<std::size_t>(std::ceil((kLogWHi - kLogWLo) / kStep)) + 1;
  values_.resize(n);
  slopes_.resize(n);

  const double w0 = std::exp(log_w_lo_);
  // Two-term small-W expansion of F: m(w) = G(1+b) w - G(1+2b) w^2 + ...
  values_[0] = std::tgamma(1.0 + beta_) * std::pow(w0, 1.0 - delta_) / (1.0 - delta_) -
               std::tgamma(1.0 + 2.0 * beta_) * std::pow(w0, 2.0 - delta_) / (2.0 - delta_);
  const auto slope_at = [&](double s) { return outage_factor(std::exp(s)) * std::exp(-delta_ * s); };
  slopes_[0] = slope_at(log_w_lo_);
  for (std::size_t i = 1; i < n; ++i) {
    const double s0 = log_w_lo_ + static_cast<double>(i - 1) * step_;
    const double s1 = log_w_lo_ + static_cast<double>(i) * step_;
    const auto seg = quad::integrate_finite(slope_at, s0, s1, spec_);
    quad::require_converged(seg, "interference kernel table");
    values_[i] = values_[i - 1] + seg.value;
    slopes_[i] = slope_at(s1);
  }
  const double w_hi = std::exp(log_w_lo_ + static_cast<double>(n - 1) * step_);
  tail_at_infinity_ = values_.back() + std::pow(w_hi, -delta_) / delta_;
}

double InterferenceKernel::outage_factor(double w) const {
  if (!(w >= 0.0)) throw DomainError("outage_factor: w must be >= 0");
  if (w == 0.0) return 0.0;
  if (std::isinf(w)) return 1.0;
  if (beta_ == 0.0) return w / (1.0 + w);
  const double beta = beta_;
  const auto f = [w, beta](double u) {
    const double z = w * std::pow(u, beta);
    if (std::isinf(z)) return std::exp(-u);
    return std::exp(-u) * z / (1.0 + z);
  };
  // The integrand switches on around u0 = w^{-1/beta}; split there when it
  // falls inside the bulk of the exponential.
  const double u0 = std::pow(w, -1.0 / beta);
  double total = 0.0;
  if (u0 < 1.0) {
    total += quad::require_converged(quad::integrate_finite(f, 0.0, u0, spec_), "outage factor")
                 .value;
    total += quad::require_converged(quad::integrate_semi_infinite(f, u0, spec_), "outage factor")
                 .value;
  } else {
    total = quad::require_converged(quad::integrate_semi_infinite(f, 0.0, spec_), "outage factor")
                .value;
  }
  return total;
}

double InterferenceKernel::tail_integral(double big_w) const {
  if (!(big_w >= 0.0)) throw DomainError("tail_integral: W must be >= 0");
  if (big_w == 0.0) return 0.0;
  if (std::isinf(big_w)) return tail_at_infinity_;
  const double s = std::log(big_w);
  if (s <= log_w_lo_) {
    return std::tgamma(1.0 + beta_) * std::pow(big_w, 1.0 - delta_) / (1.0 - delta_) -
           std::tgamma(1.0 + 2.0 * beta_) * std::pow(big_w, 2.0 - delta_) / (2.0 - delta_);
  }
  const std::size_t last = values_.size() - 1;
  const double pos = (s - log_w_lo_) / step_;
  if (pos >= static_cast<double>(last)) {
    return tail_at_infinity_ - std::pow(big_w, -delta_) / delta_;
  }
  const auto i = static_cast<std::size_t>(pos);
  const double tau = pos - static_cast<double>(i);
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + tau;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * step_ * slopes_[i] + h01 * values_[i + 1] +
         h11 * step_ * slopes_[i + 1];
}

double InterferenceKernel::exponent(double c, double r_k, double p, double lambda) const {
  if (!(c >= 0.0)) throw DomainError("interference coefficient must be >= 0");
  if (!(r_k >= 0.0)) throw DomainError("r_k must be >= 0");
  if (c == 0.0) return 0.0;
  const double a = p * lambda * kPi;
  const double big_c = c * std::pow(a, -beta_);
  const double big_w = r_k > 0.0 ? big_c * std::pow(r_k, -alpha_)
                                 : std::numeric_limits<double>::infinity();
  return 2.0 * kPi * p * lambda / alpha_ * std::pow(big_c, delta_) * tail_integral(big_w);
}

double InterferenceKernel::laplace(double c, double r_k, double p, double lambda) const {
  return std::exp(-exponent(c, r_k, p, lambda));
}

std::shared_ptr<const InterferenceKernel> InterferenceKernel::shared(double alpha, double epsilon,
                                                                      const quad::QuadratureSpec& spec) {
  using Key = std::tuple<double, double, double, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const InterferenceKernel>> cache;
  const Key key{alpha, epsilon, spec.abs_tol, spec.rel_tol, spec.max_subdivisions};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto kernel = std::make_shared<const InterferenceKernel>(alpha, epsilon, spec);
  cache.emplace(key, kernel);
  return kernel;
}

}  // namespace uplink
