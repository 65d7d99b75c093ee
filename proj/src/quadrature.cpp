#include "uplink/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "uplink/errors.hpp"

namespace uplink::quad {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ParameterError("quadrature: tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw ParameterError("quadrature: max_subdivisions must be >= 1");
  }
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec s = *this;
  s.abs_tol /= factor;
  s.rel_tol /= factor;
  return s;
}

double QuadratureSpec::tolerance_for(double value) const {
  return std::max(abs_tol, rel_tol * std::abs(value));
}

namespace {

// Kronrod 15-point abscissae; odd indices are the embedded Gauss 7-point nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "quadrature: integrand is not finite at x = " << x;
    throw NumericalError(os.str());
  }
  return y;
}

// QUADPACK qk15 rule with its error heuristic.
Segment gauss_kronrod(const Integrand& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }
  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > tiny / (50.0 * eps)) {
    err = std::max(err, 50.0 * eps * resabs);
  }
  return {a, b, value, err};
}

}  // namespace

IntegralResult integrate_finite(const Integrand& f, double a, double b,
                                const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) throw ParameterError("quadrature: lower limit exceeds upper limit");
  IntegralResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  std::priority_queue<Segment> heap;
  Segment first = gauss_kronrod(f, a, b);
  out.evaluations = 15;
  double total = first.value;
  double total_err = first.error;
  heap.push(first);

  int subdivisions = 1;
  while (total_err > spec.tolerance_for(total) && subdivisions < spec.max_subdivisions) {
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Interval can no longer be split in floating point.
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Segment left = gauss_kronrod(f, worst.a, mid);
    const Segment right = gauss_kronrod(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error_estimate = total_err;
  out.converged = total_err <= spec.tolerance_for(total);
  return out;
}

IntegralResult integrate_semi_infinite(const Integrand& f, double a,
                                       const QuadratureSpec& spec, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParameterError("quadrature: semi-infinite scale must be positive and finite");
  }
  const auto mapped = [&](double u) {
    const double w = 1.0 - u;
    const double x = a + scale * u / w;
    const double y = f(x);
    if (y == 0.0) return 0.0;
    return y * scale / (w * w);
  };
  return integrate_finite(mapped, 0.0, 1.0, spec);
}

const IntegralResult& require_converged(const IntegralResult& r, const std::string& context) {
  if (!r.converged) {
    std::ostringstream os;
    os << "quadrature did not converge (" << context << "): value " << r.value
       << ", error estimate " << r.error_estimate << " after " << r.evaluations
       << " evaluations";
    throw NumericalError(os.str());
  }
  return r;
}

}  // namespace uplink::quad
