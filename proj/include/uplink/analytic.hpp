#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uplink/params.hpp"
#include "uplink/quadrature.hpp"

namespace uplink {

struct CoverageQuery {
  int l = 1;       // order index of the user
  double t = 1.0;  // linear SINR threshold
  SystemParams params{};
};

struct CoverageCurve {
  std::vector<double> thresholds_db;
  std::vector<double> coverage;
  std::vector<double> ci_low;   // empty for analytic curves
  std::vector<double> ci_high;  // empty for analytic curves
  std::string label;
};

// Laplace transform of the interference seen by a user at distance r_l when
// interferers are excluded from B(o, r_k), evaluated at s = mu t r_l^{alpha(1-eps)}.
// This is the direct double integral over the exclusion-free annulus v and
// the squared interferer link distance q; for epsilon = 0 the q-integral is
// replaced by its closed form.
double laplace_interference_conditional(double t, double r_l, double r_k,
                                        const SystemParams& params,
                                        const quad::QuadratureSpec& spec = {});

// Tabulated form of the same Laplace transform.
//
// With C = c (p lambda pi)^{-beta}, beta = alpha eps / 2 and delta = 2 / alpha,
// substituting w = C v^{-alpha} gives
//   -log L = (2 pi p lambda / alpha) C^delta F(C r_k^{-alpha}),
//   F(W) = int_0^W m(w) w^{-1-delta} dw,  m(w) = E[w U^beta / (1 + w U^beta)],
// with U ~ Exp(1). F depends on (alpha, eps) only, so one table serves every
// (t, r_l, r_k, lambda, p). F is stored on a log grid and interpolated with
// cubic Hermite splines using the exact derivative m(W) W^{-delta}.
class InterferenceKernel {
 public:
  InterferenceKernel(double alpha, double epsilon, const quad::QuadratureSpec& spec = {});

  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }

  // m(w) by quadrature (closed form for eps = 0).
  double outage_factor(double w) const;
  // F(W); W may be +inf.
  double tail_integral(double big_w) const;
  // -log of the Laplace transform for interference coefficient c = t r_l^{alpha(1-eps)}.
  double exponent(double c, double r_k, double p, double lambda) const;
  double laplace(double c, double r_k, double p, double lambda) const;

  // Process-wide cache keyed on (alpha, epsilon, tolerances); thread safe.
  static std::shared_ptr<const InterferenceKernel> shared(double alpha, double epsilon,
                                                          const quad::QuadratureSpec& spec = {});

 private:
  double alpha_;
  double epsilon_;
  double beta_;
  double delta_;
  quad::QuadratureSpec spec_;
  double log_w_lo_;
  double step_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  double tail_at_infinity_;
};

// Noise factor times the conditioned Laplace transform. mu enters only
// through mu * noise.
double xi(double r_l, double r_k, double t, const SystemParams& params,
          const quad::QuadratureSpec& spec = {});
double xi(double r_l, double r_k, double t, const SystemParams& params,
          const InterferenceKernel& kernel);

// Coverage of the l-th user. Dispatches to coverage_kth when l = k.
// Throws NumericalError when an integral fails or the result leaves
// [-tol, 1 + tol].
double coverage_lth(const CoverageQuery& query, const quad::QuadratureSpec& spec = {});

// Coverage of the cell-edge (k-th) user.
double coverage_kth(int k, double t, const SystemParams& params,
                    const quad::QuadratureSpec& spec = {});

// Per-threshold coverage over a dB grid, evaluated concurrently.
CoverageCurve coverage_curve(int l, int k, std::span<const double> thresholds_db,
                             const SystemParams& params, const quad::QuadratureSpec& spec = {});

}  // namespace uplink
