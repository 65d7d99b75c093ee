#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "uplink/geometry.hpp"

namespace uplink {

// Convex polygon with counter-clockwise vertices.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  explicit ConvexPolygon(std::vector<Point> ccw_vertices);
  static ConvexPolygon square(Point center, double half_width);

  // Keeps the half-plane {x : (x - anchor) . normal <= 0}.
  void clip(Point anchor, Point normal);

  const std::vector<Point>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.size() < 3; }
  double area() const;
  bool contains(Point p) const;
  double max_distance_from(Point p) const;
  // Uniform point via fan triangulation.
  Point sample_uniform(Rng& rng) const;

 private:
  std::vector<Point> vertices_;
};

// Voronoi cells of a BS set intersected with a square bounding box, built by
// half-plane clipping against neighbours found through a uniform grid.
class VoronoiDiagram {
 public:
  VoronoiDiagram(std::span<const Point> sites, Point box_center, double box_half_width);

  std::size_t size() const { return sites_.size(); }
  const Point& site(std::size_t i) const { return sites_[i]; }
  ConvexPolygon cell(std::size_t i) const;
  // Grid-accelerated nearest site; same tie rule as nearest_bs.
  std::size_t nearest(Point q) const;

 private:
  std::vector<Point> sites_;
  Point origin_{};
  double half_width_ = 0.0;
  double cell_size_ = 0.0;
  int grid_n_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;

  int bucket_coord(double v, double lo) const;
};

}  // namespace uplink
