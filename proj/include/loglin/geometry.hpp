#pragma once

#include <vector>

#include <Eigen/Core>

namespace loglin {

/// Convex polygon, vertices counter-clockwise without repetition.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  /// Takes vertices as given; callers are expected to pass a CCW convex ring.
  explicit ConvexPolygon(std::vector<Eigen::Vector2d> vertices);

  static ConvexPolygon Box(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi);
  /// Regular n-gon whose inscribed circle has radius r (so it contains the disk).
  static ConvexPolygon CircumscribedDisk(const Eigen::Vector2d& center, double r, int n);

  const std::vector<Eigen::Vector2d>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double area() const;
  Eigen::Vector2d centroid() const;  // vertex average
  double support(const Eigen::Vector2d& d) const;
  bool contains(const Eigen::Vector2d& p, double tol = 1e-12) const;
  Eigen::Vector2d min_corner() const;
  Eigen::Vector2d max_corner() const;

  ConvexPolygon rotated(double angle) const;  // about the origin
  ConvexPolygon translated(const Eigen::Vector2d& offset) const;
  ConvexPolygon scaled_about_centroid(double factor) const;

  /// Checks CCW convexity (cross products >= -1e-12) and distinct vertices.
  bool is_valid() const;

 private:
  std::vector<Eigen::Vector2d> v_;
};

/// Andrew's monotone chain. Collinear points are dropped; throws Degenerate
/// when fewer than three points remain on the hull.
ConvexPolygon convex_hull(std::vector<Eigen::Vector2d> points);

/// Edge merge of two CCW convex polygons.
ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b);

/// Separating-axis test over the edge normals of both polygons; touching
/// polygons count as intersecting.
bool intersects(const ConvexPolygon& a, const ConvexPolygon& b);

}  // namespace loglin
