#include "uplink/analytic.hpp"

#include <cmath>
#include <sstream>

#include "uplink/distributions.hpp"
#include "uplink/errors.hpp"
#include "uplink/parallel.hpp"
#include "uplink/units.hpp"

namespace uplink {

namespace {

std::string context(double t, double r_l, double r_k) {
  std::ostringstream os;
  os << "t = " << t << ", r_l = " << r_l << ", r_k = " << r_k;
  return os.str();
}

quad::QuadratureSpec relative_only(const quad::QuadratureSpec& spec) {
  quad::QuadratureSpec s = spec;
  s.abs_tol = 1e-300;
  return s;
}

void check_probability(double value, const quad::QuadratureSpec& spec, const char* what) {
  const double tol = spec.tolerance_for(1.0);
  if (!(value >= -tol && value <= 1.0 + tol)) {
    std::ostringstream os;
    os << what << ": result " << value << " lies outside [0, 1] beyond tolerance " << tol;
    throw NumericalError(os.str());
  }
}

}  // namespace

double laplace_interference_conditional(double t, double r_l, double r_k, const SystemParams& params,
                                        const quad::QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  if (!(t > 0.0)) throw ParameterError("threshold t must be > 0");
  if (!(r_l >= 0.0) || !(r_k >= r_l)) throw DomainError("need 0 <= r_l <= r_k");
  if (std::isinf(r_k)) return 1.0;

  const double alpha = params.alpha;
  const double beta = alpha * params.epsilon / 2.0;
  const double c = t * std::pow(r_l, alpha * (1.0 - params.epsilon));
  if (c == 0.0) return 1.0;
  const double a = params.p * params.lambda * kPi;
  const quad::QuadratureSpec inner_spec = relative_only(spec.tightened());

  // 1 - int_0^inf a e^{-a q} / (1 + z q^beta) dq, written as the integral of
  // the complement so that small z keeps its relative accuracy.
  const auto one_minus_inner = [&](double z) {
    if (beta == 0.0) return z / (1.0 + z);
    const auto f = [a, z, beta](double q) {
      const double zq = z * std::pow(q, beta);
      if (std::isinf(zq)) return a * std::exp(-a * q);
      return a * std::exp(-a * q) * zq / (1.0 + zq);
    };
    const double q0 = std::pow(z, -1.0 / beta);
    if (q0 < 1.0 / a) {
      return quad::require_converged(quad::integrate_finite(f, 0.0, q0, inner_spec),
                                     context(t, r_l, r_k)).value +
             quad::require_converged(quad::integrate_semi_infinite(f, q0, inner_spec, 1.0 / a),
                                     context(t, r_l, r_k)).value;
    }
    return quad::require_converged(quad::integrate_semi_infinite(f, 0.0, inner_spec, 1.0 / a),
                                   context(t, r_l, r_k)).value;
  };

  const auto outer = [&](double v) {
    if (v <= 0.0) return 0.0;
    return one_minus_inner(c * std::pow(v, -alpha)) * v;
  };
  // Where z = c v^{-alpha} crosses one for a typical interferer link.
  const double knee = std::pow(c * std::tgamma(1.0 + beta) * std::pow(a, -beta), 1.0 / alpha);
  const double scale = std::max({r_k, knee, 1e-12});
  const auto res = quad::integrate_semi_infinite(outer, r_k, spec, scale);
  quad::require_converged(res, context(t, r_l, r_k));
  return std::exp(-2.0 * kPi * params.p * params.lambda * res.value);
}

double xi(double r_l, double r_k, double t, const SystemParams& params,
          const InterferenceKernel& kernel) {
  const double gain = std::pow(r_l, params.alpha * (1.0 - params.epsilon));
  const double noise = params.noise > 0.0 ? std::exp(-params.mu * t * params.noise * gain) : 1.0;
  if (noise == 0.0) return 0.0;
  return noise * kernel.laplace(t * gain, r_k, params.p, params.lambda);
}

double xi(double r_l, double r_k, double t, const SystemParams& params,
          const quad::QuadratureSpec& spec) {
  params.validate();
  if (!(r_l >= 0.0) || !(r_k >= r_l)) throw DomainError("xi: need 0 <= r_l <= r_k");
  if (!(t > 0.0)) throw ParameterError("threshold t must be > 0");
  const auto kernel = InterferenceKernel::shared(params.alpha, params.epsilon, spec);
  return xi(r_l, r_k, t, params, *kernel);
}

double coverage_kth(int k, double t, const SystemParams& params, const quad::QuadratureSpec& spec) {
  params.validate();
  spec.validate();
  if (k != params.k) throw ParameterError("coverage_kth: k disagrees with params.k");
  if (!(t > 0.0)) throw ParameterError("threshold t must be > 0");
  const auto kernel = InterferenceKernel::shared(params.alpha, params.epsilon, spec);

  const double lambda = params.lambda;
  const auto integrand = [&](double r) {
    const double pdf = kth_nearest_pdf(r, k, lambda);
    if (pdf == 0.0) return 0.0;
    return xi(r, r, t, params, *kernel) * pdf;
  };
  const double scale = std::sqrt(k / (lambda * kPi));
  const auto res = quad::integrate_semi_infinite(integrand, 0.0, spec, scale);
  quad::require_converged(res, "coverage_kth at t = " + std::to_string(t));
  check_probability(res.value, spec, "coverage_kth");
  return res.value;
}

double coverage_lth(const CoverageQuery& query, const quad::QuadratureSpec& spec) {
  const SystemParams& params = query.params;
  params.validate();
  spec.validate();
  const int l = query.l;
  const int k = params.k;
  const double t = query.t;
  if (l < 1 || l > k) throw ParameterError("coverage_lth: l must satisfy 1 <= l <= k");
  if (!(t > 0.0)) throw ParameterError("threshold t must be > 0");
  if (l == k) return coverage_kth(k, t, params, spec);

  const auto kernel = InterferenceKernel::shared(params.alpha, params.epsilon, spec);
  const DistanceParams dist = params.distances(l);
  const double lp = params.lambda * kPi;
  const quad::QuadratureSpec inner_spec = spec.tightened();
  const double gap_scale = (k - l) / lp;

  const auto inner = [&](double r_l) {
    if (kth_nearest_pdf(r_l, l, params.lambda) == 0.0) return 0.0;
    const auto f = [&](double r_k) {
      const double pdf = joint_distance_pdf(r_l, r_k, dist);
      if (pdf == 0.0) return 0.0;
      return xi(r_l, r_k, t, params, *kernel) * pdf;
    };
    const double scale = std::sqrt(r_l * r_l + gap_scale) - r_l;
    const auto res = quad::integrate_semi_infinite(f, r_l, inner_spec, std::max(scale, 1e-12));
    quad::require_converged(res, context(t, r_l, r_l));
    return res.value;
  };
  const auto res = quad::integrate_semi_infinite(inner, 0.0, spec, std::sqrt(l / lp));
  quad::require_converged(res, "coverage_lth at t = " + std::to_string(t));
  check_probability(res.value, spec, "coverage_lth");
  return res.value;
}

CoverageCurve coverage_curve(int l, int k, std::span<const double> thresholds_db,
                             const SystemParams& params, const quad::QuadratureSpec& spec) {
  params.validate();
  if (k != params.k) throw ParameterError("coverage_curve: k disagrees with params.k");
  for (std::size_t i = 1; i < thresholds_db.size(); ++i) {
    if (!(thresholds_db[i] > thresholds_db[i - 1])) {
      throw ParameterError("coverage_curve: thresholds must be strictly increasing");
    }
  }
  CoverageCurve curve;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  curve.coverage.assign(thresholds_db.size(), 0.0);
  std::ostringstream label;
  label << "analytic l=" << l << " k=" << k << " eps=" << params.epsilon;
  curve.label = label.str();

  // Build the kernel once before fanning out.
  InterferenceKernel::shared(params.alpha, params.epsilon, spec);
  parallel_for(thresholds_db.size(), [&](std::size_t i) {
    const double t = db_to_linear(thresholds_db[i]);
    try {
      curve.coverage[i] = coverage_lth({l, t, params}, spec);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << "at threshold " << thresholds_db[i] << " dB: " << e.what();
      throw NumericalError(os.str());
    }
  });
  return curve;
}

}  // namespace uplink
