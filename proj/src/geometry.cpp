#include "loglin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "loglin/errors.hpp"
#include "loglin/lie.hpp"

namespace loglin {
namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

// Index of the lowest (then leftmost) vertex.
std::size_t bottom_index(const std::vector<Eigen::Vector2d>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].y() < v[best].y() || (v[i].y() == v[best].y() && v[i].x() < v[best].x())) best = i;
  }
  return best;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Eigen::Vector2d> vertices) : v_(std::move(vertices)) {}

ConvexPolygon ConvexPolygon::Box(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  return ConvexPolygon({lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}});
}

ConvexPolygon ConvexPolygon::CircumscribedDisk(const Eigen::Vector2d& center, double r, int n) {
  if (n < 3) throw InvalidArgument("polygon needs at least three sides");
  const double R = r / std::cos(std::numbers::pi / n);
  std::vector<Eigen::Vector2d> v;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    v.push_back(center + R * Eigen::Vector2d(std::cos(a), std::sin(a)));
  }
  return ConvexPolygon(std::move(v));
}

double ConvexPolygon::area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[(i + 1) % v_.size()]);
  return 0.5 * a;
}

Eigen::Vector2d ConvexPolygon::centroid() const {
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : v_) c += p;
  return v_.empty() ? c : Eigen::Vector2d(c / static_cast<double>(v_.size()));
}

double ConvexPolygon::support(const Eigen::Vector2d& d) const {
  double h = -std::numeric_limits<double>::infinity();
  for (const auto& p : v_) h = std::max(h, p.dot(d));
  return h;
}

bool ConvexPolygon::contains(const Eigen::Vector2d& p, double tol) const {
  if (v_.size() < 3) return false;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Eigen::Vector2d& a = v_[i];
    const Eigen::Vector2d& b = v_[(i + 1) % v_.size()];
    const Eigen::Vector2d e = b - a;
    if (cross(e, p - a) < -tol * std::max(1.0, e.norm())) return false;
  }
  return true;
}

Eigen::Vector2d ConvexPolygon::min_corner() const {
  Eigen::Vector2d m = v_.front();
  for (const auto& p : v_) m = m.cwiseMin(p);
  return m;
}

Eigen::Vector2d ConvexPolygon::max_corner() const {
  Eigen::Vector2d m = v_.front();
  for (const auto& p : v_) m = m.cwiseMax(p);
  return m;
}

ConvexPolygon ConvexPolygon::rotated(double angle) const {
  const Eigen::Matrix2d R = rotation2d(angle);
  std::vector<Eigen::Vector2d> v;
  v.reserve(v_.size());
  for (const auto& p : v_) v.push_back(R * p);
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::translated(const Eigen::Vector2d& offset) const {
  std::vector<Eigen::Vector2d> v;
  v.reserve(v_.size());
  for (const auto& p : v_) v.push_back(p + offset);
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::scaled_about_centroid(double factor) const {
  const Eigen::Vector2d c = centroid();
  std::vector<Eigen::Vector2d> v;
  v.reserve(v_.size());
  for (const auto& p : v_) v.push_back(c + factor * (p - c));
  return ConvexPolygon(std::move(v));
}

bool ConvexPolygon::is_valid() const {
  const std::size_t n = v_.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if ((v_[i] - v_[j]).norm() <= 1e-9) return false;
    }
    if (cross(v_[i], v_[(i + 1) % n], v_[(i + 2) % n]) < -1e-12) return false;
  }
  return area() > 0.0;
}

ConvexPolygon convex_hull(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw Degenerate("convex_hull: fewer than three distinct points");

  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw Degenerate("convex_hull: points are collinear");
  return ConvexPolygon(std::move(h));
}

ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("minkowski_sum: empty polygon");
  // Rotate both rings to start at the bottom vertex, then merge edges by angle.
  const auto ring = [](const ConvexPolygon& p) {
    std::vector<Eigen::Vector2d> v = p.vertices();
    std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(bottom_index(v)), v.end());
    return v;
  };
  const std::vector<Eigen::Vector2d> P = ring(a), Q = ring(b);
  const std::size_t n = P.size(), m = Q.size();
  std::vector<Eigen::Vector2d> out;
  out.reserve(n + m);
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    out.push_back(P[i % n] + Q[j % m]);
    const Eigen::Vector2d ep = P[(i + 1) % n] - P[i % n];
    const Eigen::Vector2d eq = Q[(j + 1) % m] - Q[j % m];
    const double c = cross(ep, eq);
    if (j >= m || (i < n && c > 0.0)) {
      ++i;
    } else if (i >= n || c < 0.0) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  // Drop collinear and repeated vertices introduced by parallel edges.
  std::vector<Eigen::Vector2d> clean;
  for (const auto& p : out) {
    if (clean.empty() || (p - clean.back()).norm() > 1e-12) clean.push_back(p);
  }
  if (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-12) clean.pop_back();
  if (clean.size() < 3) return ConvexPolygon(std::move(clean));
  std::vector<Eigen::Vector2d> strict;
  const std::size_t k = clean.size();
  for (std::size_t t = 0; t < k; ++t) {
    const Eigen::Vector2d& prev = clean[(t + k - 1) % k];
    const Eigen::Vector2d& next = clean[(t + 1) % k];
    if (std::abs(cross(prev, clean[t], next)) > 1e-12 * (next - prev).squaredNorm()) strict.push_back(clean[t]);
  }
  return ConvexPolygon(std::move(strict));
}

bool intersects(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (a.empty() || b.empty()) return false;
  const auto separated_by_edges_of = [](const ConvexPolygon& p, const ConvexPolygon& q) {
    const auto& v = p.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Eigen::Vector2d e = v[(i + 1) % v.size()] - v[i];
      const Eigen::Vector2d normal(e.y(), -e.x());  // outward for CCW
      if (normal.squaredNorm() == 0.0) continue;
      // q lies strictly beyond p's edge when its minimum projection exceeds p's max.
      if (-q.support(-normal) > p.support(normal)) return true;
    }
    return false;
  };
  return !separated_by_edges_of(a, b) && !separated_by_edges_of(b, a);
}

}  // namespace loglin
