#include "uplink/params.hpp"

#include <cmath>

#include "uplink/errors.hpp"

namespace uplink {

SystemParams SystemParams::make(double lambda, int k, double alpha, double epsilon) {
  SystemParams s;
  s.lambda = lambda;
  s.k = k;
  s.p = k >= 1 ? 1.0 / k : 0.0;
  s.alpha = alpha;
  s.epsilon = epsilon;
  s.validate();
  return s;
}

void SystemParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be > 0");
  if (k < 1) throw ParameterError("k must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
  if (!(alpha > 2.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be > 2");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ParameterError("epsilon must lie in [0, 1]");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be > 0");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ParameterError("noise power must be >= 0");
}

}  // namespace uplink
