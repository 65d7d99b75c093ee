#pragma once

// Distance distributions of the conditional-thinning model: users form a
// uniform PPP of intensity lambda, the k nearest to the origin are served,
// and interferers form a p-thinned PPP outside the k-th distance.

namespace uplink {

struct DistanceParams {
  double lambda = 0.0;  // user intensity per unit area
  double p = 0.0;       // thinning probability
  int k = 1;            // resource groups (served users)
  int l = 1;            // order index of the user of interest, 1 <= l <= k

  // p = 1/k.
  static DistanceParams with_default_p(double lambda, int k, int l);
  void validate() const;
};

// Rayleigh density of an interferer's distance to its own BS:
// 2 pi p lambda r exp(-p lambda pi r^2).
double interferer_link_pdf(double r_x, const DistanceParams& params);
double interferer_link_cdf(double r_x, const DistanceParams& params);

// Joint density of the l-th and k-th nearest distances (l < k); zero outside
// 0 <= r_l <= r_k. Throws ParameterError when l >= k.
double joint_distance_pdf(double r_l, double r_k, const DistanceParams& params);
double log_joint_distance_pdf(double r_l, double r_k, const DistanceParams& params);

// Density of the k-th nearest point of a uniform PPP:
// 2 (lambda pi)^k / (k-1)! r^(2k-1) exp(-lambda pi r^2).
double kth_nearest_pdf(double r_k, int k, double lambda);
double log_kth_nearest_pdf(double r_k, int k, double lambda);
// P[R_k <= r] = P(k, lambda pi r^2), the regularized lower incomplete gamma.
double kth_nearest_cdf(double r_k, int k, double lambda);

// Density of R_k given R_l = r_l: joint / f_{R_l}, with f_{R_l} the l-th
// nearest-point density. Throws NumericalError when f_{R_l}(r_l) falls below
// kConditioningFloor.
double conditional_kth_pdf(double r_k, double r_l, const DistanceParams& params);

inline constexpr double kConditioningFloor = 1e-300;

}  // namespace uplink
