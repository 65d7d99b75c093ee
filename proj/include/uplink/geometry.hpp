#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uplink/rng.hpp"

namespace uplink {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}
double distance(Point a, Point b);

// Circular observation region standing in for the whole plane.
struct Window {
  Point center{};
  double radius = 1.0;

  void validate() const;
  double area() const;
  bool contains(Point p) const { return squared_distance(p, center) <= radius * radius; }
};

struct PppSample {
  std::vector<Point> points;
  double intensity = 0.0;
  Window window{};
};

// The k nearest points (sorted by distance to the origin) and the p-thinned
// remainder. Every interferer lies strictly beyond r_k.
struct ThinnedPartition {
  std::vector<Point> nearest_k;
  std::vector<Point> interferers;
  double r_k = 0.0;
};

Point uniform_in_disc(const Window& window, Rng& rng);

// Homogeneous PPP restricted to the window.
PppSample sample_ppp(double intensity, const Window& window, Rng& rng);

// Keeps the k points nearest to the origin and an independent p-thinning of
// every point outside B(o, r_k). Throws InsufficientSampleError when the
// sample holds fewer than k points.
ThinnedPartition conditional_thin(const PppSample& sample, int k, double p, Rng& rng);

std::vector<double> ordered_distances(std::span<const Point> points, Point origin = {});

// Index of the closest BS; ties go to the lowest index.
std::size_t nearest_bs(Point user, std::span<const Point> bss);
std::vector<std::size_t> nearest_bs_association(std::span<const Point> users,
                                                std::span<const Point> bss);

inline constexpr long kMaxCellProposals = 1'000'000;

// Uniform point of (Voronoi cell of bss[target]) ∩ window by rejection
// against nearest_bs. Throws SamplingError after max_proposals misses.
Point sample_uniform_in_cell(std::size_t target, std::span<const Point> bss,
                             const Window& window, Rng& rng,
                             long max_proposals = kMaxCellProposals);

}  // namespace uplink
