#include <doctest.h>

#include <algorithm>
#include <set>

#include "support.hpp"
#include "tilemeasure/errors.hpp"
#include "tilemeasure/spectral.hpp"
#include "tilemeasure/substitution.hpp"

using namespace tilemeasure;
using testing::kPhi;

TEST_SUITE("substitution") {
  TEST_CASE("built-in systems validate") {
    for (const char* name : {"penrose", "square4", "chair"}) {
      const auto sys = builtin_system(name);
      const auto report = validate(sys);
      INFO(name << "\n" << format_report(report));
      CHECK(report.passed);
      CHECK(std::abs(report.total_area - 1.0) <= 1e-9);
      for (const auto& p : report.prototiles) {
        CHECK(p.area_residual < 1e-9);
        CHECK(p.vertices_outside == 0);
      }
    }
  }

  TEST_CASE("a translated Penrose child fails validation") {
    SystemDraft draft = penrose_draft();
    draft.rules[2].children[0].translate.x += 0.1;  // d pushed into its siblings
    const auto sys = assemble_system(draft);
    const auto report = validate(sys);
    CHECK_FALSE(report.passed);
    const auto& c = report.prototiles[2];
    CHECK(c.max_child_overlap > 1e-6);
    CHECK(c.coverage_deficit > 1e-6);
    // The other prototiles are untouched.
    CHECK(report.prototiles[0].passed);
    CHECK(report.prototiles[3].passed);
  }

  TEST_CASE("overlap is measured against an intersection-area oracle") {
    SystemDraft draft = square4_draft();
    draft.rules[0].children[1].translate = {0.5, 0};  // overlaps the first quarter by half
    const auto sys = assemble_system(draft);
    const auto report = validate(sys);
    CHECK_FALSE(report.passed);
    // Two unit squares offset by 1/2 in the doubled frame: overlap 1/2, rescaled by total area 1.
    const Polygon a = testing::unit_square();
    const double expect = intersection_area(a, translate_polygon({0.5, 0}, a));
    CHECK(report.prototiles[0].max_child_overlap == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("structural errors") {
    SystemDraft bad = square4_draft();
    bad.lambda = 1.0;
    CHECK_THROWS_AS(assemble_system(bad), SystemError);
    bad = square4_draft();
    bad.rules[0].children[0].child = "zz";
    CHECK_THROWS_AS(assemble_system(bad), SystemError);
    bad = square4_draft();
    bad.rules.clear();
    CHECK_THROWS_AS(assemble_system(bad), SystemError);
    bad = square4_draft();
    bad.prototiles[0].puncture = Point{5, 5};
    CHECK_THROWS_AS(assemble_system(bad), SystemError);
    bad = penrose_draft();
    bad.prototiles[1].label = "a";
    CHECK_THROWS_AS(assemble_system(bad), SystemError);
  }

  TEST_CASE("assembly normalizes area and separates supports") {
    const auto& sys = testing::penrose();
    double total = 0.0;
    for (const auto& p : sys.prototiles()) total += p.shape.area();
    CHECK(std::abs(total - 1.0) <= 1e-12);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      for (std::size_t j = i + 1; j < sys.size(); ++j) {
        CHECK(polygon_distance(sys.prototile(i).shape, sys.prototile(j).shape) > 0.1);
      }
    }
    CHECK(sys.lambda() == kPhi);
    CHECK(sys.stats().merge_eps == doctest::Approx(1e-7 * sys.stats().diameter));
  }

  TEST_CASE("primitivity exponent") {
    CHECK(primitivity_exponent(testing::penrose()) == 2u);
    CHECK(primitivity_exponent(testing::square4()) == 1u);
    CHECK(primitivity_exponent(testing::chair()) == 1u);
    CHECK_FALSE(primitivity_exponent(builtin_system("split-squares")).has_value());
  }

  TEST_CASE("generate_level counts") {
    CHECK(generate_level(testing::penrose(), 2).tiles.size() == 26);
    CHECK(generate_level(testing::square4(), 3).tiles.size() == 64);
    const auto zero = generate_level(testing::penrose(), 0);
    REQUIRE(zero.tiles.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(zero.tiles[i].type == i);
      CHECK(zero.tiles[i].geometry(testing::penrose()).vertices() == testing::penrose().prototile(i).shape.vertices());
    }
  }

  TEST_CASE("generation refuses levels over the cap and names the count") {
    GenerateOptions small{1000};
    try {
      (void)generate_level(testing::penrose(), 6, small);
      FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
      CHECK(std::string(e.what()).find("1220") != std::string::npos);
    }
    CHECK_THROWS_AS((void)generate_level(testing::penrose(), 17), ResourceError);
  }

  TEST_CASE("subtile_of") {
    const auto& sys = testing::penrose();
    const Tile b = tile_at(sys, parse_address(sys, "b"));
    CHECK(subtile_of(sys, b, 2).size() == 5);
    const Tile t = tile_at(sys, parse_address(sys, "c/1.0"));
    const auto same = subtile_of(sys, t, 2);
    REQUIRE(same.size() == 1);
    CHECK(same[0].address == t.address);

    const auto& sq = testing::square4();
    for (const auto& tile : generate_level(sq, 1).tiles) CHECK(subtile_of(sq, tile, 3).size() == 16);
  }

  TEST_CASE("addresses format and parse") {
    const auto& sys = testing::penrose();
    const TileAddress a = parse_address(sys, "b/0.2");
    CHECK(a.root == 1);
    CHECK(a.digits == std::vector<std::uint16_t>{0, 2});
    CHECK(format_address(sys, a) == "b/0.2");
    CHECK(format_address(sys, parse_address(sys, "c")) == "c");
    CHECK(parse_address(sys, "c/").level() == 0);
    CHECK_THROWS_AS(parse_address(sys, "b/2"), std::invalid_argument);    // b has two children
    CHECK_THROWS_AS(parse_address(sys, "b/0.3"), std::invalid_argument);  // d has three
    CHECK_THROWS_AS(parse_address(sys, "e/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_address(sys, "b/0..1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_address(sys, "b/x"), std::invalid_argument);
    CHECK(a.prefix(1).is_prefix_of(a));
    CHECK_FALSE(a.is_prefix_of(a.prefix(1)));
  }

  TEST_CASE("tiles have the expected area and lie in their root") {
    const auto& sys = testing::penrose();
    for (const auto& t : generate_level(sys, 4).tiles) {
      const Polygon g = t.geometry(sys);
      const double expect = std::pow(kPhi, -8.0) * sys.prototile(t.type).shape.area();
      REQUIRE(std::abs(g.area() - expect) <= 1e-10 * expect);
      const Polygon& root = sys.prototile(t.address.root).shape;
      REQUIRE(std::abs(intersection_area(g, root) - g.area()) <= 1e-12);
      REQUIRE(point_in_polygon(t.puncture, g) == Location::inside);
    }
  }

  TEST_CASE("level-1 tiles inside b are a d then a b") {
    const auto& sys = testing::penrose();
    const Tile d = tile_at(sys, parse_address(sys, "b/0"));
    const Tile b = tile_at(sys, parse_address(sys, "b/1"));
    CHECK(sys.prototile(d.type).label == "d");
    CHECK(sys.prototile(b.type).label == "b");
  }

  TEST_CASE("tiles_meeting_region") {
    const auto& sys = testing::penrose();
    const auto level = generate_level(sys, 2);
    const Polygon& b = sys.prototile(1).shape;
    const auto hits = tiles_meeting_region(sys, level, b);
    // Brute force over all 26 tiles.
    std::vector<TileAddress> brute;
    for (const auto& t : level.tiles) {
      if (polygon_distance(t.geometry(sys), b) <= sys.stats().merge_eps) brute.push_back(t.address);
    }
    REQUIRE(hits.size() == brute.size());
    CHECK(hits.size() == 5);
    for (std::size_t i = 0; i < hits.size(); ++i) CHECK(hits[i].address == brute[i]);

    const Point x = level.tiles[7].puncture;
    const double h = 1e-4;
    const Polygon tiny({{x.x - h, x.y - h}, {x.x + h, x.y - h}, {x.x + h, x.y + h}, {x.x - h, x.y + h}});
    const auto one = tiles_meeting_region(sys, level, tiny);
    REQUIRE(one.size() == 1);
    CHECK(one[0].address == level.tiles[7].address);

    const Polygon away = translate_polygon({100, 100}, testing::unit_square());
    CHECK(tiles_meeting_region(sys, level, away).empty());
  }
}
