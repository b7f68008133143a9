#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <numbers>
#include <random>

#include "support.hpp"
#include "tilemeasure/geometry.hpp"
#include "tilemeasure/kernels.hpp"

using namespace tilemeasure;
namespace k = tilemeasure::kernels;

namespace {

struct Cloud {
  std::vector<double> xs, ys;
  std::vector<std::uint32_t> w;
  k::PointsView view() const { return {xs.data(), ys.data(), xs.size()}; }
};

// Random points plus points planted exactly on vertices and edges of `p`, so the
// boundary branches get exercised.
Cloud make_cloud(const Polygon& p, std::size_t n, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  std::uniform_real_distribution<double> t(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> wt(1, 1000);
  const Box& b = p.bounds();
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    double x, y;
    if (i % 5 == 0) {
      const auto [a, e] = p.edge(i % p.size());
      const double s = (i % 15 == 0) ? 0.0 : t(gen);
      x = a.x + s * (e.x - a.x);
      y = a.y + s * (e.y - a.y);
    } else {
      x = b.min_x + u(gen) * b.width();
      y = b.min_y + u(gen) * b.height();
    }
    c.xs.push_back(x);
    c.ys.push_back(y);
    c.w.push_back(wt(gen));
  }
  return c;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("active table is available and named") {
    const auto& active = k::active_kernels();
    CHECK(active.name != nullptr);
    CHECK(std::string(k::scalar_kernels().name) == "scalar");
    MESSAGE("active kernels: " << active.name);
  }

  TEST_CASE("scalar and AVX2 kernels agree bit for bit") {
    const k::KernelTable* vec = k::avx2_kernels();
    if (vec == nullptr) {
      MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
      return;
    }
    const k::KernelTable& ref = k::scalar_kernels();
    auto& gen = testing::rng();

    std::vector<Polygon> polys{testing::unit_square(),
                               Polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
                               testing::penrose().prototile(2).shape, testing::penrose().prototile(0).shape};
    std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
    for (int i = 0; i < 20; ++i) {
      polys.push_back(apply_isometry(Isometry::from_parts(ang(gen), i % 2 == 0, {ang(gen), -ang(gen)}),
                                     polys[static_cast<std::size_t>(i) % 4]));
    }

    for (const auto& poly : polys) {
      const PreparedPolygon prepared(poly);
      for (const std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 4099u}) {
        const Cloud c = make_cloud(poly, n, gen);
        for (const double eps : {0.0, 1e-12, 1e-7}) {
          std::vector<std::uint8_t> a(n + 1, 7), b(n + 1, 7);
          ref.classify(c.view(), prepared.table(), eps, a.data());
          vec->classify(c.view(), prepared.table(), eps, b.data());
          REQUIRE(a == b);
          for (const bool include : {true, false}) {
            REQUIRE(ref.weight_in_polygon(c.view(), c.w.data(), prepared.table(), eps, include) ==
                    vec->weight_in_polygon(c.view(), c.w.data(), prepared.table(), eps, include));
          }
          for (std::size_t e = 0; e < poly.size(); ++e) {
            const auto [p, q] = poly.edge(e);
            const k::Segment seg{p.x, p.y, q.x, q.y};
            REQUIRE(ref.weight_near_segment(c.view(), c.w.data(), seg, eps) ==
                    vec->weight_near_segment(c.view(), c.w.data(), seg, eps));
          }
        }
      }
    }
  }

  TEST_CASE("scalar and AVX2 transforms agree bit for bit") {
    const k::KernelTable* vec = k::avx2_kernels();
    if (vec == nullptr) return;
    auto& gen = testing::rng();
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const std::size_t n : {1u, 4u, 7u, 1025u}) {
      std::vector<double> m[6];
      for (auto& col : m) {
        col.resize(n);
        for (auto& x : col) x = u(gen);
      }
      const k::AffineBatch batch{m[0].data(), m[1].data(), m[2].data(), m[3].data(), m[4].data(), m[5].data(), n};
      std::vector<double> ax(n), ay(n), bx(n), by(n);
      const double px = u(gen), py = u(gen);
      k::scalar_kernels().transform(batch, px, py, ax.data(), ay.data());
      vec->transform(batch, px, py, bx.data(), by.data());
      REQUIRE(std::memcmp(ax.data(), bx.data(), n * sizeof(double)) == 0);
      REQUIRE(std::memcmp(ay.data(), by.data(), n * sizeof(double)) == 0);
    }
  }

  TEST_CASE("scalar classification matches an independent oracle") {
    // Textbook crossing test plus a projected-distance boundary check.
    const auto oracle = [](Point x, const Polygon& p, double eps) {
      const std::size_t n = p.size();
      for (std::size_t i = 0; i < n; ++i) {
        const auto [a, b] = p.edge(i);
        const Point d = b - a;
        double t = dot(x - a, d) / dot(d, d);
        t = std::clamp(t, 0.0, 1.0);
        if (distance(x, a + t * d) <= eps) return std::uint8_t{2};
      }
      bool in = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        if ((p[i].y > x.y) != (p[j].y > x.y) &&
            x.x < (p[j].x - p[i].x) * (x.y - p[i].y) / (p[j].y - p[i].y) + p[i].x) {
          in = !in;
        }
      }
      return static_cast<std::uint8_t>(in ? 1 : 0);
    };
    for (const auto& poly : {Polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
                             testing::penrose().prototile(3).shape}) {
      const PreparedPolygon prepared(poly);
      const Cloud c = make_cloud(poly, 3000, testing::rng());
      std::vector<std::uint8_t> codes(c.xs.size());
      k::scalar_kernels().classify(c.view(), prepared.table(), 1e-9, codes.data());
      for (std::size_t i = 0; i < codes.size(); ++i) {
        REQUIRE(codes[i] == oracle({c.xs[i], c.ys[i]}, poly, 1e-9));
      }
    }
  }
}
