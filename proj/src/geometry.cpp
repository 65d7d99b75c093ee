#include "uplink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uplink/errors.hpp"
#include "uplink/units.hpp"

namespace uplink {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Window::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ParameterError("window radius must be positive and finite");
  }
  if (!std::isfinite(center.x) || !std::isfinite(center.y)) {
    throw ParameterError("window center must be finite");
  }
}

double Window::area() const { return kPi * radius * radius; }

Point uniform_in_disc(const Window& window, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = window.radius * std::sqrt(unit(rng));
  const double theta = 2.0 * kPi * unit(rng);
  return {window.center.x + r * std::cos(theta), window.center.y + r * std::sin(theta)};
}

PppSample sample_ppp(double intensity, const Window& window, Rng& rng) {
  if (!(intensity > 0.0) || !std::isfinite(intensity)) {
    throw ParameterError("PPP intensity must be positive and finite");
  }
  window.validate();
  PppSample out{{}, intensity, window};
  std::poisson_distribution<long> count(intensity * window.area());
  const long n = count(rng);
  out.points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out.points.push_back(uniform_in_disc(window, rng));
  return out;
}

ThinnedPartition conditional_thin(const PppSample& sample, int k, double p, Rng& rng) {
  if (k < 1) throw ParameterError("conditional_thin: k must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("conditional_thin: p must be in (0, 1]");
  const std::size_t kk = static_cast<std::size_t>(k);
  if (sample.points.size() < kk) {
    std::ostringstream os;
    os << "conditional_thin: sample has " << sample.points.size() << " points but k = " << k
       << "; enlarge the window";
    throw InsufficientSampleError(os.str());
  }

  std::vector<std::pair<double, Point>> keyed;
  keyed.reserve(sample.points.size());
  for (const Point& q : sample.points) keyed.emplace_back(squared_distance(q, {}), q);
  const auto by_distance = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::nth_element(keyed.begin(), keyed.begin() + static_cast<long>(kk - 1), keyed.end(),
                   by_distance);
  std::sort(keyed.begin(), keyed.begin() + static_cast<long>(kk), by_distance);

  ThinnedPartition out;
  out.r_k = std::sqrt(keyed[kk - 1].first);
  for (std::size_t i = 0; i < kk; ++i) out.nearest_k.push_back(keyed[i].second);

  std::bernoulli_distribution keep(p);
  const double rk2 = keyed[kk - 1].first;
  // Walk the sample in its original order so the thinning draws do not depend
  // on the nth_element permutation.
  for (const Point& q : sample.points) {
    if (squared_distance(q, {}) > rk2 && keep(rng)) out.interferers.push_back(q);
  }
  return out;
}

std::vector<double> ordered_distances(std::span<const Point> points, Point origin) {
  std::vector<double> d;
  d.reserve(points.size());
  for (const Point& q : points) d.push_back(distance(q, origin));
  std::sort(d.begin(), d.end());
  return d;
}

std::size_t nearest_bs(Point user, std::span<const Point> bss) {
  if (bss.empty()) throw ParameterError("nearest_bs: BS set is empty");
  std::size_t best = 0;
  double best_d2 = squared_distance(user, bss[0]);
  for (std::size_t i = 1; i < bss.size(); ++i) {
    const double d2 = squared_distance(user, bss[i]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

std::vector<std::size_t> nearest_bs_association(std::span<const Point> users,
                                                std::span<const Point> bss) {
  if (bss.empty()) throw ParameterError("nearest_bs_association: BS set is empty");
  std::vector<std::size_t> out;
  out.reserve(users.size());
  for (const Point& u : users) out.push_back(nearest_bs(u, bss));
  return out;
}

Point sample_uniform_in_cell(std::size_t target, std::span<const Point> bss,
                             const Window& window, Rng& rng, long max_proposals) {
  if (target >= bss.size()) throw ParameterError("sample_uniform_in_cell: invalid target BS");
  window.validate();
  for (long i = 0; i < max_proposals; ++i) {
    const Point q = uniform_in_disc(window, rng);
    if (nearest_bs(q, bss) == target) return q;
  }
  throw SamplingError("sample_uniform_in_cell: rejection budget exhausted", max_proposals);
}

}  // namespace uplink
