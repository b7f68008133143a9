#include "tilemeasure/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tilemeasure/errors.hpp"

namespace tilemeasure {
namespace {

constexpr double kOrthoTol = 1e-12;

Box bounds_of(std::span<const Point> v) {
  Box b{v[0].x, v[0].y, v[0].x, v[0].y};
  for (const auto& p : v) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection with an absolute collinearity tolerance.
bool segments_intersect(Point a, Point b, Point c, Point d, double tol) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))) {
    return true;
  }
  if (std::abs(d1) <= tol && on_segment(c, d, a)) return true;
  if (std::abs(d2) <= tol && on_segment(c, d, b)) return true;
  if (std::abs(d3) <= tol && on_segment(a, b, c)) return true;
  if (std::abs(d4) <= tol && on_segment(a, b, d)) return true;
  return false;
}

// Sutherland-Hodgman: clip `subject` against the convex CCW polygon `clip`.
std::vector<Point> clip_convex(std::vector<Point> subject, const std::vector<Point>& clip) {
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !subject.empty(); ++e) {
    const Point a = clip[e];
    const Point b = clip[(e + 1) % m];
    std::vector<Point> out;
    out.reserve(subject.size() + 2);
    const std::size_t n = subject.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point p = subject[i];
      const Point q = subject[(i + 1) % n];
      const double sp = orient(a, b, p);
      const double sq = orient(a, b, q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double shoelace_abs(const std::vector<Point>& v) {
  if (v.size() < 3) return 0.0;
  return std::abs(signed_area(v));
}

std::vector<Polygon> convex_pieces(const Polygon& p) {
  if (is_convex(p)) return {p};
  return triangulate(p);
}

}  // namespace

// ---------------------------------------------------------------------------
// Isometry

Isometry::Isometry(Mat2 linear, Point translation) : linear_(linear), translation_(translation) {
  const double c0 = linear.a * linear.a + linear.c * linear.c;
  const double c1 = linear.b * linear.b + linear.d * linear.d;
  const double off = linear.a * linear.b + linear.c * linear.d;
  if (std::abs(c0 - 1.0) > kOrthoTol || std::abs(c1 - 1.0) > kOrthoTol ||
      std::abs(off) > kOrthoTol || std::abs(std::abs(linear.det()) - 1.0) > kOrthoTol) {
    throw GeometryError("isometry linear part is not orthogonal");
  }
  if (!std::isfinite(translation.x) || !std::isfinite(translation.y)) {
    throw GeometryError("isometry translation is not finite");
  }
}

Isometry Isometry::from_parts(double angle, bool reflect, Point translation) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 rot{c, -s, s, c};
  if (reflect) rot = rot * Mat2{1.0, 0.0, 0.0, -1.0};
  return Isometry(rot, translation);
}

Isometry Isometry::compose(const Isometry& other) const {
  Isometry out;
  out.linear_ = linear_ * other.linear_;
  out.translation_ = linear_ * other.translation_ + translation_;
  return out;
}

double Isometry::angle() const {
  // For L = R(θ)·diag(1, ±1) the first column is (cos θ, sin θ).
  double a = std::atan2(linear_.c, linear_.a);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

// ---------------------------------------------------------------------------
// Polygon

double signed_area(std::span<const Point> v) {
  const std::size_t n = v.size();
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice += cross(v[i], v[(i + 1) % n]);
  return 0.5 * twice;
}

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw GeometryError("polygon needs at least 3 vertices");
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("non-finite vertex");
  }
  const Box b = bounds_of(vertices_);
  const double scale = std::max(b.width(), b.height());
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(vertices_[i], vertices_[(i + 1) % n]) <= 1e-14 * scale) {
      throw GeometryError("polygon has a repeated vertex");
    }
  }
  const double a = signed_area(vertices_);
  if (std::abs(a) <= 1e-14 * scale * scale) throw GeometryError("degenerate (zero-area) polygon");
  if (a < 0.0) std::reverse(vertices_.begin(), vertices_.end());

  const double tol = 1e-14 * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a0 = vertices_[i];
    const Point a1 = vertices_[(i + 1) % n];
    // Adjacent edge folding back on itself.
    const Point a2 = vertices_[(i + 2) % n];
    if (std::abs(orient(a0, a1, a2)) <= tol && dot(a1 - a0, a2 - a1) < 0.0) {
      throw GeometryError("polygon is not simple (edge folds back)");
    }
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a0, a1, vertices_[j], vertices_[(j + 1) % n], tol)) {
        throw GeometryError("polygon is not simple (edges " + std::to_string(i) + " and " +
                            std::to_string(j) + " intersect)");
      }
    }
  }
  finish();
}

Polygon::Polygon(std::vector<Point> vertices, Trusted) : vertices_(std::move(vertices)) {
  if (signed_area(vertices_) < 0.0) std::reverse(vertices_.begin(), vertices_.end());
  finish();
}

void Polygon::finish() {
  area_ = std::abs(signed_area(vertices_));
  bounds_ = bounds_of(vertices_);
}

Polygon apply_isometry(const Isometry& h, const Polygon& p) {
  std::vector<Point> out;
  out.reserve(p.size());
  for (const auto& v : p.vertices()) out.push_back(h.apply(v));
  // Orientation-reversing maps turn the winding; the trusted constructor restores CCW.
  return Polygon(std::move(out), Polygon::Trusted{});
}

Polygon apply_similarity(const Similarity& f, const Polygon& p) {
  std::vector<Point> out;
  out.reserve(p.size());
  for (const auto& v : p.vertices()) out.push_back(f.apply(v));
  return Polygon(std::move(out), Polygon::Trusted{});
}

Polygon scale_polygon(double s, const Polygon& p) {
  return apply_similarity(Similarity{Mat2{s, 0.0, 0.0, s}, {}}, p);
}

Polygon translate_polygon(Point t, const Polygon& p) {
  return apply_similarity(Similarity{Mat2{}, t}, p);
}

double polygon_area(const Polygon& p) { return p.area(); }

bool is_convex(const Polygon& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (orient(p[i], p[(i + 1) % n], p[(i + 2) % n]) < 0.0) return false;
  }
  return true;
}

std::vector<Polygon> triangulate(const Polygon& p) {
  std::vector<Point> v = p.vertices();
  std::vector<Polygon> tris;
  const double tol = 1e-14 * std::max(p.bounds().width(), p.bounds().height());
  const double area_tol = tol * tol;

  auto inside_triangle = [](Point a, Point b, Point c, Point q) {
    return orient(a, b, q) >= 0.0 && orient(b, c, q) >= 0.0 && orient(c, a, q) >= 0.0;
  };

  while (v.size() > 3) {
    const std::size_t n = v.size();
    bool clipped = false;
    for (std::size_t i = 0; i < n && !clipped; ++i) {
      const Point a = v[(i + n - 1) % n];
      const Point b = v[i];
      const Point c = v[(i + 1) % n];
      const double o = orient(a, b, c);
      if (std::abs(o) <= area_tol) {
        // Collinear vertex: dropping it leaves the region unchanged.
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
      if (o < 0.0) continue;
      bool ear = true;
      for (std::size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        if (v[j] == a || v[j] == b || v[j] == c) continue;
        if (inside_triangle(a, b, c, v[j])) ear = false;
      }
      if (!ear) continue;
      tris.push_back(Polygon({a, b, c}, Polygon::Trusted{}));
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
    }
    if (!clipped) throw GeometryError("triangulation failed: no ear found");
  }
  if (std::abs(signed_area(v)) > area_tol) tris.push_back(Polygon(std::move(v), Polygon::Trusted{}));
  return tris;
}

Point centroid(const Polygon& p) {
  const auto& v = p.vertices();
  const std::size_t n = v.size();
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % n];
    const double w = cross(a, b);
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  const double six_a = 6.0 * signed_area(v);
  const Point c{cx / six_a, cy / six_a};
  const double eps = 1e-9 * std::max(p.bounds().width(), p.bounds().height());
  if (point_in_polygon(c, p, eps) == Location::inside) return c;

  // Non-convex fallback: largest fan triangle whose centroid is interior.
  double best_area = 0.0;
  Point best{};
  for (std::size_t root = 0; root < n; ++root) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const Point a = v[root];
      const Point b = v[(root + k) % n];
      const Point d = v[(root + k + 1) % n];
      const double area = 0.5 * orient(a, b, d);
      if (area <= best_area) continue;
      const Point tc{(a.x + b.x + d.x) / 3.0, (a.y + b.y + d.y) / 3.0};
      if (point_in_polygon(tc, p, eps) == Location::inside) {
        best_area = area;
        best = tc;
      }
    }
  }
  if (best_area > 0.0) return best;
  for (const auto& t : triangulate(p)) {
    const Point tc = (1.0 / 3.0) * (t[0] + t[1] + t[2]);
    if (point_in_polygon(tc, p, eps) == Location::inside) return tc;
  }
  throw GeometryError("no interior representative point found");
}

Location point_in_polygon(Point x, const Polygon& p, double eps) {
  const PreparedPolygon prepared(p);
  std::uint8_t code = 0;
  const kernels::PointsView one{&x.x, &x.y, 1};
  kernels::scalar_kernels().classify(one, prepared.table(), eps, &code);
  return static_cast<Location>(code);
}

double segment_distance(Point x, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(x - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(x, a + t * d);
}

double polygon_distance(const Polygon& p, const Polygon& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto [a, b] = p.edge(i);
    for (std::size_t j = 0; j < q.size(); ++j) {
      const auto [c, d] = q.edge(j);
      if (segments_intersect(a, b, c, d, 0.0)) return 0.0;
    }
  }
  if (point_in_polygon(p[0], q, 0.0) != Location::outside) return 0.0;
  if (point_in_polygon(q[0], p, 0.0) != Location::outside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : p.vertices()) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const auto [c, d] = q.edge(j);
      best = std::min(best, segment_distance(v, c, d));
    }
  }
  for (const auto& v : q.vertices()) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto [a, b] = p.edge(i);
      best = std::min(best, segment_distance(v, a, b));
    }
  }
  return best;
}

double intersection_area(const Polygon& p, const Polygon& q) {
  if (!p.bounds().overlaps(q.bounds())) return 0.0;
  const auto pieces_p = convex_pieces(p);
  const auto pieces_q = convex_pieces(q);
  double total = 0.0;
  for (const auto& a : pieces_p) {
    for (const auto& b : pieces_q) {
      if (!a.bounds().overlaps(b.bounds())) continue;
      total += shoelace_abs(clip_convex(a.vertices(), b.vertices()));
    }
  }
  return std::max(total, 0.0);
}

double min_edge_length(std::span<const Polygon> polys) {
  if (polys.empty()) throw GeometryError("min_edge_length of an empty list");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : polys) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto [a, b] = p.edge(i);
      best = std::min(best, distance(a, b));
    }
  }
  return best;
}

double diameter(std::span<const Polygon> polys) {
  std::vector<Point> all;
  for (const auto& p : polys) all.insert(all.end(), p.vertices().begin(), p.vertices().end());
  double best = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) best = std::max(best, distance(all[i], all[j]));
  }
  return best;
}

// ---------------------------------------------------------------------------
// PreparedPolygon

PreparedPolygon::PreparedPolygon(const Polygon& p) {
  const std::size_t n = p.size();
  for (auto* v : {&ax_, &ay_, &bx_, &by_, &dx_, &dy_, &inv_len2_, &slope_}) v->resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [a, b] = p.edge(i);
    ax_[i] = a.x;
    ay_[i] = a.y;
    bx_[i] = b.x;
    by_[i] = b.y;
    dx_[i] = b.x - a.x;
    dy_[i] = b.y - a.y;
    inv_len2_[i] = 1.0 / (dx_[i] * dx_[i] + dy_[i] * dy_[i]);
    slope_[i] = dy_[i] != 0.0 ? dx_[i] / dy_[i] : 0.0;
  }
  const Box& b = p.bounds();
  table_ = kernels::EdgeTable{ax_.data(), ay_.data(), bx_.data(), by_.data(), dx_.data(),
                              dy_.data(), inv_len2_.data(), slope_.data(), n,
                              b.min_x, b.min_y, b.max_x, b.max_y};
}

// ---------------------------------------------------------------------------
// VertexIndex

VertexIndex::VertexIndex(double eps) : eps_(eps), inv_pitch_(1.0 / eps) {
  if (!(eps > 0.0)) throw GeometryError("vertex merge tolerance must be positive");
}

VertexKey VertexIndex::key(Point p) const {
  return {static_cast<std::int64_t>(std::floor(p.x * inv_pitch_)),
          static_cast<std::int64_t>(std::floor(p.y * inv_pitch_))};
}

std::size_t VertexIndex::insert(Point p) {
  const double gx = p.x * inv_pitch_;
  const double gy = p.y * inv_pitch_;
  const VertexKey k{static_cast<std::int64_t>(std::floor(gx)),
                    static_cast<std::int64_t>(std::floor(gy))};
  // A representative within eps/2 sits in this cell or the neighbour on the nearer side.
  const std::int64_t sx = (gx - std::floor(gx)) < 0.5 ? -1 : 1;
  const std::int64_t sy = (gy - std::floor(gy)) < 0.5 ? -1 : 1;
  const double radius2 = 0.25 * eps_ * eps_;
  const VertexKey probes[4] = {k, {k.qx + sx, k.qy}, {k.qx, k.qy + sy}, {k.qx + sx, k.qy + sy}};
  for (const auto& probe : probes) {
    const auto it = cells_.find(probe);
    if (it == cells_.end()) continue;
    for (const std::uint32_t id : it->second) {
      const Point d = representatives_[id] - p;
      if (dot(d, d) <= radius2) return id;
    }
  }
  const auto id = static_cast<std::uint32_t>(representatives_.size());
  representatives_.push_back(p);
  cells_[k].push_back(id);
  return id;
}

}  // namespace tilemeasure
