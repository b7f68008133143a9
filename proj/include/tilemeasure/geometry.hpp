#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tilemeasure/kernels.hpp"

namespace tilemeasure {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  Point operator*(Point p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  double det() const { return a * d - b * c; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Planar isometry x -> Q x + t with Q orthogonal.
class Isometry {
 public:
  Isometry() = default;
  /// Throws GeometryError unless `linear` is orthogonal within 1e-12.
  Isometry(Mat2 linear, Point translation);

  /// Reflect across the x-axis (when `reflect`), then rotate by `angle`, then translate.
  static Isometry from_parts(double angle, bool reflect, Point translation);
  static Isometry identity() { return {}; }

  const Mat2& linear() const { return linear_; }
  Point translation() const { return translation_; }
  bool orientation_reversing() const { return linear_.det() < 0.0; }

  Point apply(Point p) const { return linear_ * p + translation_; }
  /// (this ∘ other)(x) = this(other(x)).
  Isometry compose(const Isometry& other) const;
  /// Rotation angle of the orientation-preserving part, in [0, 2π).
  double angle() const;

 private:
  Mat2 linear_{};
  Point translation_{};
};

/// x -> L x + offset where L = scale * orthogonal. Tile maps in the fixed-support frame.
struct Similarity {
  Mat2 linear{};
  Point offset{};

  Point apply(Point p) const { return linear * p + offset; }
  /// (this ∘ other)(x).
  Similarity compose(const Similarity& inner) const {
    return {linear * inner.linear, linear * inner.offset + offset};
  }
  double scale() const { return std::sqrt(std::abs(linear.det())); }
  bool orientation_reversing() const { return linear.det() < 0.0; }
};

struct Box {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

  bool overlaps(const Box& o, double eps = 0.0) const {
    return min_x <= o.max_x + eps && o.min_x <= max_x + eps && min_y <= o.max_y + eps &&
           o.min_y <= max_y + eps;
  }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

double signed_area(std::span<const Point> vertices);

/// Simple polygon stored counter-clockwise.
class Polygon {
 public:
  /// Accepts either winding; clockwise input is reversed. Throws GeometryError on fewer
  /// than three vertices, non-finite coordinates, zero area, or self-intersection.
  explicit Polygon(std::vector<Point> vertices);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  std::pair<Point, Point> edge(std::size_t i) const {
    return {vertices_[i], vertices_[(i + 1) % vertices_.size()]};
  }
  double area() const { return area_; }
  const Box& bounds() const { return bounds_; }

 private:
  struct Trusted {};
  Polygon(std::vector<Point> vertices, Trusted);
  friend Polygon apply_isometry(const Isometry&, const Polygon&);
  friend Polygon apply_similarity(const Similarity&, const Polygon&);
  friend std::vector<Polygon> triangulate(const Polygon&);

  void finish();

  std::vector<Point> vertices_;
  double area_ = 0.0;
  Box bounds_{};
};

enum class Location : std::uint8_t { outside = 0, inside = 1, boundary = 2 };

inline constexpr double kDefaultBoundaryEps = 1e-9;

Polygon apply_isometry(const Isometry& h, const Polygon& p);
Polygon apply_similarity(const Similarity& f, const Polygon& p);
Polygon scale_polygon(double s, const Polygon& p);
Polygon translate_polygon(Point t, const Polygon& p);
double polygon_area(const Polygon& p);
Point centroid(const Polygon& p);
bool is_convex(const Polygon& p);
/// Ear-clipping triangulation; every triangle lies inside `p`.
std::vector<Polygon> triangulate(const Polygon& p);
Location point_in_polygon(Point x, const Polygon& p, double eps = kDefaultBoundaryEps);
double segment_distance(Point x, Point a, Point b);
/// Smallest distance between the closed polygons (0 when they intersect).
double polygon_distance(const Polygon& p, const Polygon& q);
double intersection_area(const Polygon& p, const Polygon& q);
/// Throws GeometryError on an empty list.
double min_edge_length(std::span<const Polygon> polys);
/// Largest vertex-to-vertex distance over the union.
double diameter(std::span<const Polygon> polys);

/// Polygon with the edge table the batch kernels consume.
class PreparedPolygon {
 public:
  explicit PreparedPolygon(const Polygon& p);
  PreparedPolygon(const PreparedPolygon&) = delete;
  PreparedPolygon& operator=(const PreparedPolygon&) = delete;

  const kernels::EdgeTable& table() const { return table_; }

 private:
  std::vector<double> ax_, ay_, bx_, by_, dx_, dy_, inv_len2_, slope_;
  kernels::EdgeTable table_{};
};

struct VertexKey {
  std::int64_t qx = 0;
  std::int64_t qy = 0;
  friend bool operator==(VertexKey, VertexKey) = default;
};

struct VertexKeyHash {
  std::size_t operator()(VertexKey k) const noexcept {
    auto h = static_cast<std::uint64_t>(k.qx) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.qy) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Tolerance-based vertex identification on a grid of pitch `eps`. A point joins an
/// existing class when it lies within eps/2 of that class's representative; the
/// representative's cell and the nearest neighbouring cells are probed.
class VertexIndex {
 public:
  explicit VertexIndex(double eps);

  VertexKey key(Point p) const;
  /// Returns the class id (dense, in first-seen order).
  std::size_t insert(Point p);
  std::size_t size() const { return representatives_.size(); }
  Point representative(std::size_t id) const { return representatives_[id]; }
  const std::vector<Point>& representatives() const { return representatives_; }
  double eps() const { return eps_; }

 private:
  double eps_;
  double inv_pitch_;
  std::unordered_map<VertexKey, std::vector<std::uint32_t>, VertexKeyHash> cells_;
  std::vector<Point> representatives_;
};

}  // namespace tilemeasure
