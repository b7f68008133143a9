#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "support.hpp"
#include "tilemeasure/io.hpp"
#include "tilemeasure/spectral.hpp"

using namespace tilemeasure;
using testing::kPhi;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("expression values") {
    CHECK(std::abs(eval_expr("phi*phi - phi - 1")) <= 1e-12);
    CHECK(eval_expr("sqrt(5)") == doctest::Approx(2.2360679774997896).epsilon(1e-16));
    CHECK(eval_expr("(1+sqrt(5))/2") == eval_expr("phi"));
    CHECK(eval_expr("phi") == (1 + std::sqrt(5.0)) / 2);
    CHECK(eval_expr("1 + 2 * 3") == 7);
    CHECK(eval_expr("(1 + 2) * 3") == 9);
    CHECK(eval_expr("8 / 4 / 2") == 1);
    CHECK(eval_expr("10 - 4 - 3") == 3);
    CHECK(eval_expr("-2 * -3") == 6);
    CHECK(eval_expr("--1") == 1);
    CHECK(eval_expr("2.5e-1") == 0.25);
    CHECK(eval_expr(" 7*pi/5 ") == 7 * std::numbers::pi / 5);
  }

  TEST_CASE("expression errors carry positions") {
    const auto position = [](const char* src) -> std::ptrdiff_t {
      try {
        (void)eval_expr(src);
      } catch (const ExprError& e) {
        return static_cast<std::ptrdiff_t>(e.position());
      }
      return -1;
    };
    CHECK(position("1 + ") == 4);
    CHECK(position("2 * (3 + 4") == 10);
    CHECK(position("1 $ 2") == 2);
    CHECK(position("tau") == 0);
    CHECK(position("sqrt 4") == 5);
    CHECK(position("") == 0);
    CHECK(position("1 / (2 - 2)") == 4);
    CHECK(position("sqrt(1 - 2)") == 5);
    try {
      (void)eval_expr("3/0");
    } catch (const ExprError& e) {
      CHECK(e.kind() == ExprError::Kind::domain);
    }
    try {
      (void)eval_expr("3 3");
    } catch (const ExprError& e) {
      CHECK(e.kind() == ExprError::Kind::syntax);
    }
  }

  TEST_CASE("bundled system files") {
    const auto penrose = load_system_file(testing::systems_dir() / "penrose.sys");
    CHECK(penrose.report.passed);
    CHECK(penrose.system.size() == 4);
    CHECK(penrose.system.lambda() == kPhi);
    CHECK(structurally_equal(penrose.system, testing::penrose(), 1e-12));

    const auto square = load_system_file(testing::systems_dir() / "square4.sys");
    CHECK(square.report.passed);
    CHECK(square.system.size() == 1);
    CHECK(square.system.lambda() == 2.0);

    const auto chair = load_system_file(testing::systems_dir() / "chair.sys");
    CHECK(chair.report.passed);
    CHECK(structurally_equal(chair.system, testing::chair(), 1e-12));
    CHECK(chair.system.rule(0)[2].placement.orientation_reversing());
  }

  TEST_CASE("parse succeeds on inconsistent rules and reports the overlap") {
    const char* text = R"({
      "name": "bad",
      "lambda": 2,
      "prototiles": [{"label": "q", "vertices": [[0,0],[1,0],[1,1],[0,1]]}],
      "rules": {"q": [
        {"child": "q", "translate": [0, 0]},
        {"child": "q", "translate": ["1/2", 0]},
        {"child": "q", "translate": [0, 1]},
        {"child": "q", "translate": [1, 1]}
      ]}
    })";
    const auto parsed = parse_system(text);
    CHECK_FALSE(parsed.report.passed);
    const Polygon sq = testing::unit_square();
    CHECK(parsed.report.prototiles[0].max_child_overlap ==
          doctest::Approx(intersection_area(sq, translate_polygon({0.5, 0}, sq))).epsilon(1e-12));
    CHECK(format_report(parsed.report).find("FAIL") != std::string::npos);
  }

  TEST_CASE("syntax errors carry line and column") {
    const std::string text = "{\n  \"name\": \"x\",\n  \"lambda\": 2,,\n}";
    try {
      (void)parse_system(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 15);
    }
  }

  TEST_CASE("semantic errors name the problem") {
    const auto message = [](const std::string& text) -> std::string {
      try {
        (void)parse_system(text);
      } catch (const SystemError& e) {
        return e.what();
      }
      return "";
    };
    const std::string head = R"({"lambda": 2, "prototiles": [{"label": "q", "vertices": [[0,0],[1,0],[1,1],[0,1]]}], )";
    CHECK(message(head + R"("rules": {"q": [{"child": "r"}]}})").find("unknown child label 'r'") != std::string::npos);
    CHECK(message(head + R"("rules": {"p": []}})").find("unknown parent label 'p'") != std::string::npos);
    CHECK(message(head + R"("rules": {"q": [{"child": "q", "angle": "pi/0"}]}})").find("division by zero") !=
          std::string::npos);
    CHECK(message(head + R"("rules": {"q": [{"child": "q", "reflect": 1}]}})").find("reflect") != std::string::npos);
    CHECK(message(R"({"lambda": 2, "rules": {}})").find("prototiles") != std::string::npos);
    CHECK(message(R"([1, 2])").find("top level") != std::string::npos);
    const std::string dup = R"({"lambda": 2, "prototiles": [{"label": "q", "vertices": [[0,0],[1,0],[0,1]]},
                                                    {"label": "q", "vertices": [[0,0],[1,0],[0,1]]}], "rules": {}})";
    CHECK(message(dup).find("duplicate") != std::string::npos);
  }

  TEST_CASE("serialize then parse is the identity") {
    for (const auto* sys : {&testing::penrose(), &testing::square4(), &testing::chair()}) {
      const std::string once = serialize_system(*sys);
      const auto again = parse_system(once);
      CHECK(again.report.passed);
      CHECK(structurally_equal(*sys, again.system, 1e-12));
      CHECK(serialize_system(again.system) == once);
    }
  }

  TEST_CASE("load_system resolves built-in names") {
    CHECK(load_system("builtin:square4").system.name() == "square4");
    CHECK_THROWS_AS(load_system("builtin:nope"), std::invalid_argument);
    CHECK_THROWS(load_system("/nonexistent/file.sys"));
  }

  TEST_CASE("csv export") {
    const auto& sys = testing::penrose();
    const auto level = generate_level(sys, 2);
    const auto dir = std::filesystem::temp_directory_path();

    const auto sigma_path = dir / "tilemeasure_sigma2.csv";
    export_csv(build_sigma(sys, level), sigma_path);
    const std::string text = slurp(sigma_path);
    CHECK(text.find('\r') == std::string::npos);
    const auto rows = lines(text);
    REQUIRE(rows.size() == 31);
    CHECK(rows[0] == "kind,k,x,y,weight_num,weight_den,weight_real");
    double sum = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cells = split(rows[i]);
      REQUIRE(cells.size() == 7);
      CHECK(cells[0] == "sigma");
      CHECK(cells[1] == "2");
      CHECK(cells[4] == "1");
      CHECK(cells[5] == "30");
      sum += std::stod(cells[6]);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);

    std::ostringstream rho_csv;
    const auto rho = build_rho(sys, level);
    write_csv(rho, rho_csv);
    std::vector<int> in_b;
    const auto& b = sys.prototile(1).shape;
    for (const auto& row : lines(rho_csv.str())) {
      const auto cells = split(row);
      if (cells[0] != "rho") continue;
      CHECK(cells[5] == "78");
      // 17 significant digits round-trip the coordinates.
      const Point p{std::stod(cells[2]), std::stod(cells[3])};
      if (point_in_polygon(p, b, sys.stats().merge_eps) != Location::outside) in_b.push_back(std::stoi(cells[4]));
    }
    std::sort(in_b.begin(), in_b.end());
    CHECK(in_b == std::vector<int>{1, 2, 2, 3, 3, 4});

    std::ostringstream xi0;
    const auto& sq = testing::square4();
    write_csv(build_xi(sq, generate_level(sq, 0)), xi0);
    CHECK(xi0.str() == "kind,k,x,y,weight_num,weight_den,weight_real\nxi,0,0.5,0.5,1,1,1\n");
  }

  TEST_CASE("svg export") {
    const auto& sys = testing::penrose();
    const auto level = generate_level(sys, 2);
    const std::vector<DiscreteMeasure> xi{build_xi(sys, level)};
    std::ostringstream out;
    write_svg(sys, level, xi, out);
    CHECK(count(out.str(), "<polygon") == 26);
    CHECK(count(out.str(), "<circle") == 26);
    CHECK(out.str().find("viewBox=") != std::string::npos);

    std::ostringstream bare;
    write_svg(sys, generate_level(sys, 0), {}, bare);
    CHECK(count(bare.str(), "<polygon") == 4);
    CHECK(count(bare.str(), "<circle") == 0);

    const auto& sq = testing::square4();
    const auto l1 = generate_level(sq, 1);
    const std::vector<DiscreteMeasure> sigma{build_sigma(sq, l1)};
    const auto path = std::filesystem::temp_directory_path() / "tilemeasure_square.svg";
    render_svg(sq, l1, sigma, path);
    const std::string text = slurp(path);
    CHECK(count(text, "<polygon") == 4);
    CHECK(count(text, "<circle") == 9);

    // Radii follow the square root of the weight.
    std::ostringstream rho_svg;
    const std::vector<DiscreteMeasure> rho{build_rho(sq, l1)};
    write_svg(sq, l1, rho, rho_svg);
    std::set<double> radii;
    const std::regex r_attr("r=\"([0-9.e+-]+)\"");
    const std::string s = rho_svg.str();
    for (auto it = std::sregex_iterator(s.begin(), s.end(), r_attr); it != std::sregex_iterator(); ++it) {
      radii.insert(std::stod((*it)[1]));
    }
    REQUIRE(radii.size() == 3);
    const double small = *radii.begin(), large = *radii.rbegin();
    CHECK(large / small == doctest::Approx(2.0).epsilon(1e-6));  // sqrt(4/1)
  }
}
