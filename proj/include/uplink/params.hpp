#pragma once

#include "uplink/distributions.hpp"

namespace uplink {

// Network and channel parameters shared by the analytic engine and the
// simulators.
struct SystemParams {
  double lambda = 0.24;  // user PPP intensity
  int k = 1;             // orthogonal resource groups per cell
  double p = 1.0;        // thinning probability (1/k by default)
  double alpha = 2.5;    // path-loss exponent, > 2
  double epsilon = 1.0;  // fractional power-control factor in [0, 1]
  double mu = 1.0;       // inverse mean of the exponential fading
  double noise = 0.0;    // noise power sigma^2

  // p = 1/k, mu = 1, noise = 0.
  static SystemParams make(double lambda, int k, double alpha, double epsilon);

  // Throws ParameterError naming the violated invariant.
  void validate() const;

  DistanceParams distances(int l) const { return DistanceParams{lambda, p, k, l}; }
};

}  // namespace uplink
