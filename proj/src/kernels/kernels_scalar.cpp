#include <algorithm>

#include "tilemeasure/kernels.hpp"

namespace tilemeasure::kernels {
namespace {

std::uint8_t classify_one(double x, double y, const EdgeTable& e, double eps) {
  if (x < e.min_x - eps || x > e.max_x + eps || y < e.min_y - eps || y > e.max_y + eps) {
    return kOutside;
  }
  const double eps2 = eps * eps;
  bool boundary = false;
  bool inside = false;
  for (std::size_t k = 0; k < e.count; ++k) {
    const double px = x - e.ax[k];
    const double py = y - e.ay[k];
    double t = (px * e.dx[k] + py * e.dy[k]) * e.inv_len2[k];
    t = std::min(std::max(t, 0.0), 1.0);
    const double ex = px - t * e.dx[k];
    const double ey = py - t * e.dy[k];
    boundary = boundary || (ex * ex + ey * ey <= eps2);

    if ((e.ay[k] > y) != (e.by[k] > y)) {
      const double xint = e.ax[k] + (y - e.ay[k]) * e.slope[k];
      if (x < xint) inside = !inside;
    }
  }
  if (boundary) return kBoundary;
  return inside ? kInside : kOutside;
}

void classify(PointsView pts, const EdgeTable& edges, double eps, std::uint8_t* out) {
  for (std::size_t i = 0; i < pts.count; ++i) out[i] = classify_one(pts.xs[i], pts.ys[i], edges, eps);
}

std::uint64_t weight_in_polygon(PointsView pts, const std::uint32_t* weights,
                                const EdgeTable& edges, double eps, bool include_boundary) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < pts.count; ++i) {
    const auto loc = classify_one(pts.xs[i], pts.ys[i], edges, eps);
    if (loc == kInside || (include_boundary && loc == kBoundary)) total += weights[i];
  }
  return total;
}

std::uint64_t weight_near_segment(PointsView pts, const std::uint32_t* weights, Segment s,
                                  double eps) {
  const double dx = s.bx - s.ax;
  const double dy = s.by - s.ay;
  const double inv_len2 = 1.0 / (dx * dx + dy * dy);
  const double eps2 = eps * eps;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < pts.count; ++i) {
    const double px = pts.xs[i] - s.ax;
    const double py = pts.ys[i] - s.ay;
    double t = (px * dx + py * dy) * inv_len2;
    t = std::min(std::max(t, 0.0), 1.0);
    const double ex = px - t * dx;
    const double ey = py - t * dy;
    if (ex * ex + ey * ey <= eps2) total += weights[i];
  }
  return total;
}

void transform(const AffineBatch& m, double px, double py, double* out_x, double* out_y) {
  for (std::size_t i = 0; i < m.count; ++i) {
    out_x[i] = (m.m00[i] * px + m.m01[i] * py) + m.tx[i];
    out_y[i] = (m.m10[i] * px + m.m11[i] * py) + m.ty[i];
  }
}

constexpr KernelTable kScalar{"scalar", classify, weight_in_polygon, weight_near_segment,
                              transform};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace tilemeasure::kernels
