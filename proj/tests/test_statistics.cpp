#include <cmath>

#include "doctest.h"
#include "uplink/errors.hpp"
#include "uplink/rng.hpp"
#include "uplink/statistics.hpp"

using namespace uplink;
using namespace uplink::stats;

TEST_CASE("normal quantile and intervals") {
  CHECK(z_for_confidence(0.99) == doctest::Approx(2.5758293035489).epsilon(1e-10));
  CHECK(z_for_confidence(0.95) == doctest::Approx(1.9599639845401).epsilon(1e-10));
  const Interval n = normal_interval(0.5, 100, 0.95);
  CHECK(n.low == doctest::Approx(0.5 - 1.9599639845401 * 0.05));
  CHECK(n.high == doctest::Approx(0.5 + 1.9599639845401 * 0.05));
  const Interval clipped = normal_interval(0.01, 10, 0.99);
  CHECK(clipped.low == 0.0);
  const Interval w = wilson_interval(0.0, 100, 0.95);
  CHECK(w.low == doctest::Approx(0.0));
  // z^2 / (n + z^2) for p_hat = 0.
  CHECK(w.high == doctest::Approx(3.8414588 / 103.8414588).epsilon(1e-6));
  CHECK_THROWS_AS(z_for_confidence(1.0), ParameterError);
}

TEST_CASE("ks distance") {
  const std::vector<double> s{0.1, 0.4, 0.7};
  // Against U(0,1) the largest gap is 1 - 0.7 just after the last point.
  CHECK(ks_distance(s, [](double x) { return x; }) == doctest::Approx(0.3));
  CHECK(ks_distance_two_sample(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
  CHECK(ks_distance_two_sample(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 1.0);
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(0.0) == 1.0);

  Rng rng = make_stream(3, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(5000), b(5000);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  CHECK(ks_two_sample_pvalue(a, b) > 1e-3);
  for (auto& x : b) x = x * x;
  CHECK(ks_two_sample_pvalue(a, b) < 1e-6);
}

TEST_CASE("chi-square tail") {
  CHECK(chi_square_pvalue(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_pvalue(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_square_pvalue(0.0, 4) == 1.0);
}
