#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tilemeasure/bratteli.hpp"
#include "tilemeasure/spectral.hpp"

using namespace tilemeasure;
using testing::kPhi;

TEST_SUITE("bratteli") {
  TEST_CASE("diagram from Penrose") {
    const auto& sys = testing::penrose();
    const auto diag = diagram_from_system(sys);
    CHECK(diag.vertices_per_level() == 4);
    // One edge per rule entry: 1^T A 1.
    CHECK(diag.edge_count() == 10);
    CHECK(BigInt(diag.edge_count()) == count_tiles(build_matrix(sys), 1));
    CHECK(diag.multiplicity() == build_matrix(sys));
    for (std::size_t v = 0; v < 4; ++v) {
      const auto& out = diag.outgoing(v);
      REQUIRE(out.size() == sys.rule(v).size());
      for (std::size_t d = 0; d < out.size(); ++d) {
        CHECK(diag.edge(out[d]).label == d);
        CHECK(diag.edge(out[d]).range == sys.rule(v)[d].child);
      }
    }
  }

  TEST_CASE("diagram from the quartered square") {
    const auto diag = diagram_from_system(testing::square4());
    CHECK(diag.vertices_per_level() == 1);
    CHECK(diag.edge_count() == 4);
    CHECK(diag.multiplicity() == SubstitutionMatrix(1, {4}));
  }

  TEST_CASE("cylinder measures") {
    const auto& sys = testing::penrose();
    const auto diag = diagram_from_system(sys);
    const auto d = spectral_data(sys);
    std::size_t seen = 0;
    for (const auto& p : enumerate_paths(diag, 2)) {
      if (terminal_vertex(diag, p) != 2) continue;
      ++seen;
      CHECK(std::abs(cylinder_measure(diag, p, d) - 1 / (2 * std::pow(kPhi, 5))) <= 1e-12);
      CHECK(cylinder_measure(diag, p, d) == doctest::Approx(0.0450850).epsilon(1e-6));
    }
    CHECK(seen == 8);
    for (std::size_t v = 0; v < 4; ++v) CHECK(cylinder_measure(diag, FinitePath{v, {}}, d) == d.v_left[v]);

    const auto& sq = testing::square4();
    const auto dq = diagram_from_system(sq);
    const auto sd = spectral_data(sq);
    for (const auto& p : enumerate_paths(dq, 3)) CHECK(cylinder_measure(dq, p, sd) == 1.0 / 64);
  }

  TEST_CASE("invalid paths are rejected") {
    const auto diag = diagram_from_system(testing::penrose());
    const auto d = spectral_data(testing::penrose());
    // Edge 0 leaves a; edge 2 leaves b.
    CHECK_THROWS_AS(cylinder_measure(diag, FinitePath{0, {0, 2}}, d), std::invalid_argument);
    CHECK_THROWS_AS(check_path(diag, FinitePath{1, {0}}), std::invalid_argument);
    CHECK_THROWS_AS(check_path(diag, FinitePath{9, {}}), std::invalid_argument);
    CHECK_THROWS_AS(check_path(diag, FinitePath{0, {99}}), std::invalid_argument);
  }

  TEST_CASE("paths map to tiles") {
    const auto& sys = testing::penrose();
    const auto diag = diagram_from_system(sys);
    const FinitePath b_to_d{1, {diag.edge_id(1, 0)}};
    const Tile t = path_to_tile(sys, diag, b_to_d);
    CHECK(sys.prototile(t.type).label == "d");
    CHECK(format_address(sys, t.address) == "b/0");
    const Tile root = path_to_tile(sys, diag, FinitePath{2, {}});
    CHECK(root.geometry(sys).vertices() == sys.prototile(2).shape.vertices());

    for (std::size_t k = 0; k <= 4; ++k) {
      for (const auto& tile : generate_level(sys, k).tiles) {
        const FinitePath p = path_from_address(diag, tile.address);
        REQUIRE(p.depth() == k);
        REQUIRE(address_from_path(diag, p) == tile.address);
        REQUIRE(terminal_vertex(diag, p) == tile.type);
      }
    }
  }

  TEST_CASE("pushforward on Penrose to depth 4") {
    const auto& sys = testing::penrose();
    const auto diag = diagram_from_system(sys);
    const auto report = pushforward_check(sys, diag, spectral_data(sys), 4);
    CHECK(report.passed);
    CHECK(report.max_deviation <= 1e-9);
    std::size_t total = 0;
    for (const auto& r : report.rows) {
      total += r.paths;
      CHECK(std::abs(r.cylinder_sum - 1.0) <= 1e-9);
      CHECK(r.max_tower_residual <= 1e-12);
      CHECK(r.max_terminal_spread <= 1e-9);
      CHECK(r.max_containment_defect <= 1e-9);
    }
    CHECK(total == 4 + 10 + 26 + 68 + 178);
    CHECK(report.rows[0].max_boundary_multiplicity == 1);
    CHECK(report.rows[4].max_boundary_multiplicity >= report.rows[3].max_boundary_multiplicity);
  }

  TEST_CASE("pushforward on the quartered square to depth 5") {
    const auto& sq = testing::square4();
    const auto diag = diagram_from_system(sq);
    const auto report = pushforward_check(sq, diag, spectral_data(sq), 5);
    CHECK(report.passed);
    CHECK(report.max_deviation == 0.0);
    CHECK(report.rows[5].max_boundary_multiplicity == 4);
  }

  TEST_CASE("cylinder sums to depth 6") {
    const auto& sys = testing::penrose();
    const auto diag = diagram_from_system(sys);
    const auto d = spectral_data(sys);
    for (std::size_t n = 0; n <= 6; ++n) {
      double sum = 0.0;
      for (const auto& p : enumerate_paths(diag, n)) sum += cylinder_measure(diag, p, d);
      CHECK(std::abs(sum - 1.0) <= 1e-9);
    }
  }
}
