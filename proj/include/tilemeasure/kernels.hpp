#pragma once

// Batch kernels over structure-of-arrays point sets. Every kernel has a scalar
// reference implementation; vector variants must produce bit-identical results,
// so the project is compiled with -ffp-contract=off and the kernels evaluate the
// same expression trees in the same order.
//
// This header is included by the AVX2 translation unit: keep it free of inline
// functions and of anything that pulls in other project headers.

#include <cstddef>
#include <cstdint>

namespace tilemeasure::kernels {

struct PointsView {
  const double* xs = nullptr;
  const double* ys = nullptr;
  std::size_t count = 0;
};

/// Per-edge precomputation for one polygon: edge i runs from (ax, ay) to (bx, by),
/// d = b - a, inv_len2 = 1 / |d|^2, slope = dx / dy (0 for horizontal edges).
struct EdgeTable {
  const double* ax = nullptr;
  const double* ay = nullptr;
  const double* bx = nullptr;
  const double* by = nullptr;
  const double* dx = nullptr;
  const double* dy = nullptr;
  const double* inv_len2 = nullptr;
  const double* slope = nullptr;
  std::size_t count = 0;
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};

struct Segment {
  double ax = 0.0, ay = 0.0, bx = 0.0, by = 0.0;
};

/// Structure-of-arrays batch of affine maps x -> M x + t.
struct AffineBatch {
  const double* m00 = nullptr;
  const double* m01 = nullptr;
  const double* m10 = nullptr;
  const double* m11 = nullptr;
  const double* tx = nullptr;
  const double* ty = nullptr;
  std::size_t count = 0;
};

// Location codes written by `classify`.
inline constexpr std::uint8_t kOutside = 0;
inline constexpr std::uint8_t kInside = 1;
inline constexpr std::uint8_t kBoundary = 2;

struct KernelTable {
  const char* name;
  /// Location of every point: boundary when within `eps` of an edge, otherwise
  /// even-odd ray casting.
  void (*classify)(PointsView points, const EdgeTable& edges, double eps, std::uint8_t* out);
  /// Sum of `weights[i]` over points classified inside (or boundary, if requested).
  std::uint64_t (*weight_in_polygon)(PointsView points, const std::uint32_t* weights,
                                     const EdgeTable& edges, double eps, bool include_boundary);
  /// Sum of `weights[i]` over points within `eps` of the closed segment.
  std::uint64_t (*weight_near_segment)(PointsView points, const std::uint32_t* weights,
                                       Segment segment, double eps);
  /// out[i] = maps[i](p).
  void (*transform)(const AffineBatch& maps, double px, double py, double* out_x, double* out_y);
};

const KernelTable& scalar_kernels();
/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_kernels();
/// Best table for this CPU. Setting TILEMEASURE_KERNELS=scalar forces the reference path.
const KernelTable& active_kernels();

}  // namespace tilemeasure::kernels
