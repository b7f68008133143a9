// Compiled with -mavx2. Only POD declarations from kernels.hpp are visible here so no
// AVX2-encoded inline function can leak into scalar translation units.

#include <immintrin.h>

#include "tilemeasure/kernels.hpp"

namespace tilemeasure::kernels {
namespace {

constexpr std::size_t kLanes = 4;

// Lane masks are kept as doubles (all-ones / all-zeros bit patterns).
struct Classified {
  __m256d inside;
  __m256d boundary;
};

inline __m256d clamp01(__m256d t) {
  // Operand order matches std::min(std::max(t, 0), 1) exactly, including signed zeros.
  t = _mm256_max_pd(_mm256_setzero_pd(), t);
  return _mm256_min_pd(_mm256_set1_pd(1.0), t);
}

inline Classified classify4(__m256d x, __m256d y, const EdgeTable& e, __m256d eps2,
                            __m256d in_box) {
  __m256d boundary = _mm256_setzero_pd();
  __m256d inside = _mm256_setzero_pd();
  for (std::size_t k = 0; k < e.count; ++k) {
    const __m256d ax = _mm256_set1_pd(e.ax[k]);
    const __m256d ay = _mm256_set1_pd(e.ay[k]);
    const __m256d dx = _mm256_set1_pd(e.dx[k]);
    const __m256d dy = _mm256_set1_pd(e.dy[k]);
    const __m256d px = _mm256_sub_pd(x, ax);
    const __m256d py = _mm256_sub_pd(y, ay);
    __m256d t = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(px, dx), _mm256_mul_pd(py, dy)),
                              _mm256_set1_pd(e.inv_len2[k]));
    t = clamp01(t);
    const __m256d ex = _mm256_sub_pd(px, _mm256_mul_pd(t, dx));
    const __m256d ey = _mm256_sub_pd(py, _mm256_mul_pd(t, dy));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey));
    boundary = _mm256_or_pd(boundary, _mm256_cmp_pd(d2, eps2, _CMP_LE_OQ));

    const __m256d above_a = _mm256_cmp_pd(ay, y, _CMP_GT_OQ);
    const __m256d above_b = _mm256_cmp_pd(_mm256_set1_pd(e.by[k]), y, _CMP_GT_OQ);
    const __m256d straddle = _mm256_xor_pd(above_a, above_b);
    const __m256d xint = _mm256_add_pd(
        ax, _mm256_mul_pd(_mm256_sub_pd(y, ay), _mm256_set1_pd(e.slope[k])));
    const __m256d left = _mm256_cmp_pd(x, xint, _CMP_LT_OQ);
    inside = _mm256_xor_pd(inside, _mm256_and_pd(straddle, left));
  }
  boundary = _mm256_and_pd(boundary, in_box);
  inside = _mm256_andnot_pd(boundary, _mm256_and_pd(inside, in_box));
  return {inside, boundary};
}

inline __m256d box_mask(__m256d x, __m256d y, const EdgeTable& e, double eps) {
  const __m256d lo_x = _mm256_set1_pd(e.min_x - eps);
  const __m256d hi_x = _mm256_set1_pd(e.max_x + eps);
  const __m256d lo_y = _mm256_set1_pd(e.min_y - eps);
  const __m256d hi_y = _mm256_set1_pd(e.max_y + eps);
  // Negation of the scalar early-out (x < lo || x > hi || ...).
  __m256d m = _mm256_cmp_pd(x, lo_x, _CMP_NLT_UQ);
  m = _mm256_and_pd(m, _mm256_cmp_pd(x, hi_x, _CMP_NGT_UQ));
  m = _mm256_and_pd(m, _mm256_cmp_pd(y, lo_y, _CMP_NLT_UQ));
  m = _mm256_and_pd(m, _mm256_cmp_pd(y, hi_y, _CMP_NGT_UQ));
  return m;
}

inline __m256i mask_to_epi64(__m256d m) { return _mm256_castpd_si256(m); }

inline __m256i load_weights(const std::uint32_t* w) {
  return _mm256_cvtepu32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(w)));
}

inline std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[kLanes];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

void classify(PointsView pts, const EdgeTable& edges, double eps, std::uint8_t* out) {
  const __m256d eps2 = _mm256_set1_pd(eps * eps);
  std::size_t i = 0;
  for (; i + kLanes <= pts.count; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(pts.xs + i);
    const __m256d y = _mm256_loadu_pd(pts.ys + i);
    const __m256d in_box = box_mask(x, y, edges, eps);
    if (_mm256_movemask_pd(in_box) == 0) {
      for (std::size_t l = 0; l < kLanes; ++l) out[i + l] = kOutside;
      continue;
    }
    const Classified c = classify4(x, y, edges, eps2, in_box);
    const int in_bits = _mm256_movemask_pd(c.inside);
    const int bd_bits = _mm256_movemask_pd(c.boundary);
    for (std::size_t l = 0; l < kLanes; ++l) {
      out[i + l] = (bd_bits >> l) & 1 ? kBoundary : ((in_bits >> l) & 1 ? kInside : kOutside);
    }
  }
  if (i < pts.count) {
    PointsView tail{pts.xs + i, pts.ys + i, pts.count - i};
    scalar_kernels().classify(tail, edges, eps, out + i);
  }
}

std::uint64_t weight_in_polygon(PointsView pts, const std::uint32_t* weights,
                                const EdgeTable& edges, double eps, bool include_boundary) {
  const __m256d eps2 = _mm256_set1_pd(eps * eps);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + kLanes <= pts.count; i += kLanes) {
    const __m256d x = _mm256_loadu_pd(pts.xs + i);
    const __m256d y = _mm256_loadu_pd(pts.ys + i);
    const __m256d in_box = box_mask(x, y, edges, eps);
    if (_mm256_movemask_pd(in_box) == 0) continue;
    const Classified c = classify4(x, y, edges, eps2, in_box);
    const __m256d take = include_boundary ? _mm256_or_pd(c.inside, c.boundary) : c.inside;
    acc = _mm256_add_epi64(acc, _mm256_and_si256(load_weights(weights + i), mask_to_epi64(take)));
  }
  std::uint64_t total = hsum_epi64(acc);
  if (i < pts.count) {
    PointsView tail{pts.xs + i, pts.ys + i, pts.count - i};
    total += scalar_kernels().weight_in_polygon(tail, weights + i, edges, eps, include_boundary);
  }
  return total;
}

std::uint64_t weight_near_segment(PointsView pts, const std::uint32_t* weights, Segment s,
                                  double eps) {
  const double sdx = s.bx - s.ax;
  const double sdy = s.by - s.ay;
  const __m256d dx = _mm256_set1_pd(sdx);
  const __m256d dy = _mm256_set1_pd(sdy);
  const __m256d inv_len2 = _mm256_set1_pd(1.0 / (sdx * sdx + sdy * sdy));
  const __m256d ax = _mm256_set1_pd(s.ax);
  const __m256d ay = _mm256_set1_pd(s.ay);
  const __m256d eps2 = _mm256_set1_pd(eps * eps);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + kLanes <= pts.count; i += kLanes) {
    const __m256d px = _mm256_sub_pd(_mm256_loadu_pd(pts.xs + i), ax);
    const __m256d py = _mm256_sub_pd(_mm256_loadu_pd(pts.ys + i), ay);
    __m256d t = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(px, dx), _mm256_mul_pd(py, dy)), inv_len2);
    t = clamp01(t);
    const __m256d ex = _mm256_sub_pd(px, _mm256_mul_pd(t, dx));
    const __m256d ey = _mm256_sub_pd(py, _mm256_mul_pd(t, dy));
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey));
    const __m256d near = _mm256_cmp_pd(d2, eps2, _CMP_LE_OQ);
    acc = _mm256_add_epi64(acc, _mm256_and_si256(load_weights(weights + i), mask_to_epi64(near)));
  }
  std::uint64_t total = hsum_epi64(acc);
  if (i < pts.count) {
    PointsView tail{pts.xs + i, pts.ys + i, pts.count - i};
    total += scalar_kernels().weight_near_segment(tail, weights + i, s, eps);
  }
  return total;
}

void transform(const AffineBatch& m, double px, double py, double* out_x, double* out_y) {
  const __m256d x = _mm256_set1_pd(px);
  const __m256d y = _mm256_set1_pd(py);
  std::size_t i = 0;
  for (; i + kLanes <= m.count; i += kLanes) {
    const __m256d rx = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(m.m00 + i), x),
                      _mm256_mul_pd(_mm256_loadu_pd(m.m01 + i), y)),
        _mm256_loadu_pd(m.tx + i));
    const __m256d ry = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(m.m10 + i), x),
                      _mm256_mul_pd(_mm256_loadu_pd(m.m11 + i), y)),
        _mm256_loadu_pd(m.ty + i));
    _mm256_storeu_pd(out_x + i, rx);
    _mm256_storeu_pd(out_y + i, ry);
  }
  if (i < m.count) {
    AffineBatch tail{m.m00 + i, m.m01 + i, m.m10 + i, m.m11 + i, m.tx + i, m.ty + i, m.count - i};
    scalar_kernels().transform(tail, px, py, out_x + i, out_y + i);
  }
}

}  // namespace

extern const KernelTable kAvx2Table;
const KernelTable kAvx2Table{"avx2", classify, weight_in_polygon, weight_near_segment, transform};

}  // namespace tilemeasure::kernels
