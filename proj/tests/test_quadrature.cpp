#include <cmath>
#include <limits>

#include "doctest.h"
#include "uplink/errors.hpp"
#include "uplink/quadrature.hpp"
#include "uplink/units.hpp"

using namespace uplink;
using namespace uplink::quad;

TEST_CASE("finite integrals with known values") {
  const QuadratureSpec spec{1e-12, 1e-12, 200};
  auto r = integrate_finite([](double x) { return x * x; }, 0.0, 1.0, spec);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-10);

  r = integrate_finite([](double x) { return std::sin(x); }, 0.0, kPi, spec);
  CHECK(std::abs(r.value - 2.0) < 1e-8);

  r = integrate_finite([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, QuadratureSpec{});
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) < 1e-6);
  CHECK(r.evaluations > 15);
}

TEST_CASE("semi-infinite integrals with known values") {
  auto r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0, {});
  CHECK(std::abs(r.value - 1.0) < 1e-8);

  const double lambda = 0.24;
  r = integrate_semi_infinite(
      [&](double x) { return 2 * kPi * lambda * x * std::exp(-lambda * kPi * x * x); }, 0.0, {}, 1.0);
  CHECK(std::abs(r.value - 1.0) < 1e-8);

  r = integrate_semi_infinite([](double v) { return std::pow(v, 1.0 - 2.5); }, 1.0, {});
  CHECK(r.converged);
  CHECK(std::abs(r.value - 2.0) < 1e-6);
}

TEST_CASE("linearity and additivity") {
  const QuadratureSpec spec{};
  const auto f = [](double x) { return std::exp(-x) * std::cos(3 * x); };
  const double whole = integrate_finite(f, 0.0, 4.0, spec).value;
  const double scaled = integrate_finite([&](double x) { return -7.5 * f(x); }, 0.0, 4.0, spec).value;
  CHECK(std::abs(scaled + 7.5 * whole) <= spec.tolerance_for(7.5 * whole));
  const double left = integrate_finite(f, 0.0, 1.3, spec).value;
  const double right = integrate_finite(f, 1.3, 4.0, spec).value;
  CHECK(std::abs(left + right - whole) <=
        spec.tolerance_for(left) + spec.tolerance_for(right) + spec.tolerance_for(whole));
}

TEST_CASE("converged results respect their tolerance") {
  const QuadratureSpec spec{1e-9, 1e-7, 100};
  for (double s : {0.5, 2.0, 10.0}) {
    const auto r = integrate_finite([s](double x) { return std::exp(-s * x * x); }, -3.0, 5.0, spec);
    REQUIRE(r.converged);
    CHECK(r.error_estimate <= spec.tolerance_for(r.value));
  }
}

TEST_CASE("empty and reversed ranges") {
  const auto f = [](double x) { return x; };
  CHECK(integrate_finite(f, 2.0, 2.0, {}).value == 0.0);
  CHECK_THROWS_AS(integrate_finite(f, 1.0, 0.0, {}), ParameterError);
}

TEST_CASE("non-convergence is reported, not thrown") {
  const QuadratureSpec spec{1e-14, 1e-14, 1};
  const auto r = integrate_finite([](double x) { return std::sin(50 * x); }, 0.0, 10.0, spec);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(require_converged(r, "test"), NumericalError);
}

TEST_CASE("non-finite integrand throws") {
  CHECK_THROWS_AS(integrate_finite([](double) { return std::numeric_limits<double>::quiet_NaN(); },
                                   0.0, 1.0, {}),
                  NumericalError);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(QuadratureSpec({0.0, 1e-6, 10}).validate(), ParameterError);
  CHECK_THROWS_AS(QuadratureSpec({1e-8, -1.0, 10}).validate(), ParameterError);
  CHECK_THROWS_AS(QuadratureSpec({1e-8, 1e-6, 0}).validate(), ParameterError);
  const QuadratureSpec t = QuadratureSpec{}.tightened();
  CHECK(t.abs_tol == doctest::Approx(1e-9));
  CHECK(t.rel_tol == doctest::Approx(1e-7));
}
