#include "uplink/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uplink/errors.hpp"

namespace uplink {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Point> ccw_vertices) : vertices_(std::move(ccw_vertices)) {}

ConvexPolygon ConvexPolygon::square(Point c, double h) {
  return ConvexPolygon({{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}});
}

void ConvexPolygon::clip(Point anchor, Point normal) {
  if (vertices_.empty()) return;
  const auto side = [&](Point p) {
    return (p.x - anchor.x) * normal.x + (p.y - anchor.y) * normal.y;
  };
  thread_local std::vector<Point> out;
  out.clear();
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    const double sa = side(a);
    const double sb = side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  vertices_.swap(out);
}

double ConvexPolygon::area() const {
  double twice = 0.0;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

bool ConvexPolygon::contains(Point p) const {
  if (empty()) return false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices_[i], vertices_[(i + 1) % n], p) < 0.0) return false;
  }
  return true;
}

double ConvexPolygon::max_distance_from(Point p) const {
  double best = 0.0;
  for (const Point& v : vertices_) best = std::max(best, squared_distance(v, p));
  return std::sqrt(best);
}

Point ConvexPolygon::sample_uniform(Rng& rng) const {
  if (empty()) throw SamplingError("cannot sample from an empty polygon", 0);
  const Point o = vertices_[0];
  const std::size_t n = vertices_.size();
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) total += cross(o, vertices_[i], vertices_[i + 1]);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pick = unit(rng) * total;
  std::size_t tri = 1;
  for (; tri + 2 < n; ++tri) {
    const double a = cross(o, vertices_[tri], vertices_[tri + 1]);
    if (pick < a) break;
    pick -= a;
  }
  double u = unit(rng);
  double v = unit(rng);
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  const Point a = vertices_[tri];
  const Point b = vertices_[tri + 1];
  return {o.x + u * (a.x - o.x) + v * (b.x - o.x), o.y + u * (a.y - o.y) + v * (b.y - o.y)};
}

VoronoiDiagram::VoronoiDiagram(std::span<const Point> sites, Point box_center,
                               double box_half_width)
    : sites_(sites.begin(), sites.end()), half_width_(box_half_width) {
  if (sites_.empty()) throw ParameterError("VoronoiDiagram: no sites");
  if (!(box_half_width > 0.0)) throw ParameterError("VoronoiDiagram: box must be non-empty");
  origin_ = {box_center.x - box_half_width, box_center.y - box_half_width};
  const double side = 2.0 * box_half_width;
  // About one site per bucket.
  grid_n_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(sites_.size()))), 1, 4096);
  cell_size_ = side / grid_n_;
  buckets_.assign(static_cast<std::size_t>(grid_n_) * grid_n_, {});
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    const int gx = bucket_coord(sites_[i].x, origin_.x);
    const int gy = bucket_coord(sites_[i].y, origin_.y);
    buckets_[static_cast<std::size_t>(gy) * grid_n_ + gx].push_back(i);
  }
}

int VoronoiDiagram::bucket_coord(double v, double lo) const {
  return std::clamp(static_cast<int>(std::floor((v - lo) / cell_size_)), 0, grid_n_ - 1);
}

ConvexPolygon VoronoiDiagram::cell(std::size_t i) const {
  const Point s = sites_[i];
  ConvexPolygon poly = ConvexPolygon::square({origin_.x + half_width_, origin_.y + half_width_},
                                             half_width_);
  const int gx = bucket_coord(s.x, origin_.x);
  const int gy = bucket_coord(s.y, origin_.y);
  for (int ring = 0; ring <= grid_n_; ++ring) {
    // Sites in ring r are at least (r - 1) * cell_size_ away, and a site
    // farther than twice the cell's circumradius cannot cut it.
    const double reach = 2.0 * poly.max_distance_from(s);
    if (ring >= 2 && (ring - 1) * cell_size_ > reach) break;
    const double reach2 = reach * reach;
    for (int dy = -ring; dy <= ring; ++dy) {
      for (int dx = -ring; dx <= ring; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const int x = gx + dx;
        const int y = gy + dy;
        if (x < 0 || y < 0 || x >= grid_n_ || y >= grid_n_) continue;
        for (std::size_t j : buckets_[static_cast<std::size_t>(y) * grid_n_ + x]) {
          if (j == i) continue;
          const Point o = sites_[j];
          if (squared_distance(o, s) > reach2) continue;
          poly.clip({0.5 * (s.x + o.x), 0.5 * (s.y + o.y)}, {o.x - s.x, o.y - s.y});
        }
      }
    }
  }
  return poly;
}

std::size_t VoronoiDiagram::nearest(Point q) const {
  const int gx = bucket_coord(q.x, origin_.x);
  const int gy = bucket_coord(q.y, origin_.y);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int ring = 0; ring <= 2 * grid_n_; ++ring) {
    if (best != std::numeric_limits<std::size_t>::max()) {
      const double reach = (ring - 1) * cell_size_;
      if (reach > 0.0 && reach * reach > best_d2) break;
    }
    for (int dy = -ring; dy <= ring; ++dy) {
      for (int dx = -ring; dx <= ring; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const int x = gx + dx;
        const int y = gy + dy;
        if (x < 0 || y < 0 || x >= grid_n_ || y >= grid_n_) continue;
        for (std::size_t j : buckets_[static_cast<std::size_t>(y) * grid_n_ + x]) {
          const double d2 = squared_distance(q, sites_[j]);
          if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
            best_d2 = d2;
            best = j;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace uplink
