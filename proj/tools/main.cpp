// Command-line front end: validate systems, inspect eigendata, generate levels, and
// evaluate the discrete measures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tilemeasure/bratteli.hpp"
#include "tilemeasure/io.hpp"
#include "tilemeasure/kernels.hpp"
#include "tilemeasure/measures.hpp"
#include "tilemeasure/spectral.hpp"
#include "tilemeasure/substitution.hpp"

namespace tl = tilemeasure;

namespace {

constexpr int kFailure = 1;
constexpr int kUsage = 2;

// Invalid arguments that only show up once the system is loaded (bad address, ...).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v, int digits = 12) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

tl::ParsedSystem load_valid(const std::string& source) {
  tl::ParsedSystem parsed = tl::load_system(source);
  if (!parsed.report.passed) {
    throw std::runtime_error("system '" + parsed.system.name() + "' failed validation:\n" +
                             tl::format_report(parsed.report));
  }
  return parsed;
}

tl::TileAddress parse_tile(const tl::SubstitutionSystem& sys, const std::string& text) {
  try {
    return tl::parse_address(sys, text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

tl::EdgeRef parse_edge(const tl::SubstitutionSystem& sys, const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw UsageError("edge '" + text + "' must look like ADDRESS:INDEX");
  std::size_t index = 0;
  try {
    std::size_t used = 0;
    index = std::stoul(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw UsageError("bad edge index in '" + text + "'");
  }
  try {
    return tl::make_edge_ref(sys, parse_tile(sys, text.substr(0, colon)), index);
  } catch (const UsageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string fraction(const tl::Fraction& f) {
  const auto r = f.reduced();
  return std::to_string(f.num) + "/" + std::to_string(f.den) + " (= " + std::to_string(r.num) + "/" +
         std::to_string(r.den) + " = " + fmt(f.value(), 17) + ")";
}

int cmd_validate(const std::string& file) {
  const auto parsed = tl::load_system(file);
  std::cout << tl::format_report(parsed.report);
  return parsed.report.passed ? 0 : kFailure;
}

int cmd_spectral(const std::string& file, std::size_t kmax) {
  const auto parsed = load_valid(file);
  const auto& sys = parsed.system;
  const auto a = tl::build_matrix(sys);
  std::cout << "system " << sys.name() << ", " << sys.size() << " prototiles, lambda " << fmt(sys.lambda(), 17)
            << "\nmatrix (row = child type, column = parent type):\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::cout << "  " << sys.prototile(i).label << ":";
    for (std::size_t j = 0; j < a.size(); ++j) std::cout << ' ' << a(i, j);
    std::cout << '\n';
  }
  const auto exponent = tl::primitivity_exponent(a);
  if (!exponent) {
    std::cout << "not primitive\n";
    return kFailure;
  }
  std::cout << "primitive, A^" << *exponent << " > 0\n";
  const auto d = tl::spectral_data(sys);
  std::cout << "gamma " << fmt(d.gamma, 17) << " (lambda^2 " << fmt(sys.lambda() * sys.lambda(), 17) << ")\n";
  std::cout << "label  v_left              v_right             area\n";
  for (std::size_t i = 0; i < sys.size(); ++i) {
    std::cout << "  " << sys.prototile(i).label << "  " << fmt(d.v_left[i], 17) << "  " << fmt(d.v_right[i], 17)
              << "  " << fmt(sys.prototile(i).shape.area(), 17) << '\n';
  }
  std::cout << "residuals: left " << fmt(d.residuals.eig_left, 3) << ", right " << fmt(d.residuals.eig_right, 3)
            << ", biorth " << fmt(d.residuals.biorth, 3) << ", |gamma - lambda^2| " << fmt(d.residuals.lambda, 3)
            << ", iterations " << d.residuals.iterations << '\n';
  std::cout << "k  tiles  vertex-incidences  projection-defect\n";
  for (std::size_t k = 0; k <= kmax; ++k) {
    std::cout << k << "  " << tl::count_tiles(a, k) << "  " << tl::count_vertex_incidences(a, d.vertex_counts, k)
              << "  " << fmt(tl::projection_defect(a, d, k), 6) << '\n';
  }
  return 0;
}

int cmd_generate(const std::string& file, std::size_t k, const std::string& svg, bool list) {
  const auto parsed = load_valid(file);
  const auto& sys = parsed.system;
  const auto level = tl::generate_level(sys, k);
  std::vector<std::size_t> per_type(sys.size(), 0);
  for (const auto& t : level.tiles) ++per_type[t.type];
  std::cout << "level " << k << ": " << level.tiles.size() << " tiles";
  for (std::size_t i = 0; i < sys.size(); ++i) std::cout << ", " << sys.prototile(i).label << " " << per_type[i];
  std::cout << '\n';
  if (list) {
    for (const auto& t : level.tiles) std::cout << tl::format_address(sys, t.address) << '\n';
  }
  if (!svg.empty()) tl::render_svg(sys, level, {}, svg);
  return 0;
}

int cmd_measure(const std::string& file, std::size_t k, const std::string& kind_text, const std::string& csv,
                const std::string& svg) {
  const auto parsed = load_valid(file);
  const auto& sys = parsed.system;
  const auto kind = tl::parse_measure_kind(kind_text);
  const auto level = tl::generate_level(sys, k);
  const auto mu = tl::build_measure(sys, level, kind);
  // Human-readable lines move to stderr when stdout carries CSV.
  std::ostream& info = csv == "-" ? std::cerr : std::cout;
  info << kind_text << "_" << k << ": " << mu.size() << " atoms, denominator " << mu.denominator()
            << ", total " << fraction(mu.total()) << '\n';
  if (csv == "-") {
    tl::write_csv(mu, std::cout);
  } else if (!csv.empty()) {
    tl::export_csv(mu, csv);
  }
  if (!svg.empty()) tl::render_svg(sys, level, std::span(&mu, 1), svg);
  return 0;
}

int cmd_eval(const std::string& file, std::size_t k, const std::string& kind_text, const std::string& tile,
             const std::string& edge, const std::string& boundary) {
  const auto parsed = load_valid(file);
  const auto& sys = parsed.system;
  const auto kind = tl::parse_measure_kind(kind_text);
  const auto policy = boundary == "exclude" ? tl::BoundaryPolicy::exclude : tl::BoundaryPolicy::include;
  std::optional<tl::TileAddress> address;
  std::optional<tl::EdgeRef> edge_ref;
  if (!tile.empty()) address = parse_tile(sys, tile);
  if (!edge.empty()) edge_ref = parse_edge(sys, edge);

  const auto level = tl::generate_level(sys, k);
  const auto mu = tl::build_measure(sys, level, kind);
  if (address) {
    const tl::Tile t = tl::tile_at(sys, *address);
    const auto value = tl::evaluate(mu, t.geometry(sys), policy);
    const auto spectral = tl::spectral_data(sys);
    const double m = tl::lebesgue_of_tile(sys, spectral, t);
    std::cout << kind_text << "_" << k << "(" << tile << ") = " << fraction(value) << '\n'
              << "area " << fmt(m, 17) << ", gap " << fmt(std::abs(value.value() - m), 6) << '\n';
  } else {
    const auto value = tl::evaluate_on_edge(mu, *edge_ref);
    std::cout << kind_text << "_" << k << "(" << edge << ") = " << fraction(value) << '\n';
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_converge(const std::string& file, const std::string& tiles, const std::string& edges, std::size_t kmax,
                 const std::string& csv) {
  const auto parsed = load_valid(file);
  const auto& sys = parsed.system;
  std::vector<tl::TileAddress> targets;
  std::vector<tl::EdgeRef> edge_refs;
  for (const auto& t : split_list(tiles)) targets.push_back(parse_tile(sys, t));
  for (const auto& e : split_list(edges)) edge_refs.push_back(parse_edge(sys, e));
  const auto spectral = tl::spectral_data(sys);
  const auto report = tl::convergence_report(sys, spectral, targets, edge_refs, kmax);

  std::ostream& info = csv == "-" ? std::cerr : std::cout;
  info << "k  target  area  |xi-m|  |rho-m|  |sigma-m|\n";
  for (const auto& r : report.rows) {
    info << r.k << "  " << tl::format_address(sys, report.targets[r.target].tile.address) << "  "
              << fmt(report.targets[r.target].lebesgue, 9) << "  " << fmt(r.gap_xi, 4) << "  " << fmt(r.gap_rho, 4)
              << "  " << fmt(r.gap_sigma, 4) << '\n';
  }
  for (const auto& e : report.edge_rows) {
    const auto& ref = report.edges[e.edge];
    info << e.k << "  " << tl::format_address(sys, ref.tile) << ':' << ref.edge_index << "  rho "
              << fraction(e.rho) << '\n';
  }
  if (csv == "-") {
    tl::write_convergence_csv(sys, report, std::cout);
  } else if (!csv.empty()) {
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv);
    tl::write_convergence_csv(sys, report, out);
  }
  return 0;
}

int cmd_bratteli(const std::string& file, std::size_t depth, bool check) {
  const auto parsed = load_valid(file);
  const auto& sys = parsed.system;
  const auto diag = tl::diagram_from_system(sys);
  const auto spectral = tl::spectral_data(sys);
  std::cout << diag.vertices_per_level() << " vertices per level, " << diag.edge_count()
            << " edges between consecutive levels\n";
  std::cout << "paths by depth:";
  for (std::size_t n = 0; n <= depth; ++n) std::cout << ' ' << tl::count_tiles(diag.multiplicity(), n);
  std::cout << '\n';
  if (!check) return 0;

  const auto report = tl::pushforward_check(sys, diag, spectral, depth);
  std::cout << "depth  paths  sum  max|mu-area|  tower  containment  boundary-mult\n";
  for (const auto& r : report.rows) {
    std::cout << r.depth << "  " << r.paths << "  " << fmt(r.cylinder_sum, 15) << "  " << fmt(r.max_deviation, 3)
              << "  " << fmt(r.max_tower_residual, 3) << "  " << fmt(r.max_containment_defect, 3) << "  "
              << r.max_boundary_multiplicity << '\n';
  }
  std::cout << (report.passed ? "pushforward check passed" : "pushforward check FAILED") << '\n';
  return report.passed ? 0 : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete measures on self-similar substitution tilings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tilemeasure 0.1");
  std::string file;
  std::size_t k = 0, kmax = 6, depth = 3;
  std::string kind = "xi", csv, svg, tile, edge, boundary = "include", tiles, edges;
  bool list = false, check = false;
  const std::string file_help = "system file, or builtin:NAME (penrose, square4, chair, split-squares)";

  auto* validate = app.add_subcommand("validate", "check a system's rules");
  validate->add_option("file", file, file_help)->required();

  auto* spectral = app.add_subcommand("spectral", "substitution matrix, eigendata and exact counts");
  spectral->add_option("file", file, file_help)->required();
  spectral->add_option("--kmax", kmax, "print counts up to this level")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "build a level of the hierarchy");
  generate->add_option("file", file, file_help)->required();
  generate->add_option("-k", k, "level")->required();
  generate->add_option("--svg", svg, "write an SVG picture");
  generate->add_flag("--list", list, "print every tile address");

  auto* measure = app.add_subcommand("measure", "build a discrete measure");
  measure->add_option("file", file, file_help)->required();
  measure->add_option("-k", k, "level")->required();
  measure->add_option("--kind", kind, "xi, rho or sigma")->required()->check(CLI::IsMember({"xi", "rho", "sigma"}));
  measure->add_option("--csv", csv, "write atoms as CSV ('-' for stdout)");
  measure->add_option("--svg", svg, "write an SVG picture");

  auto* eval = app.add_subcommand("eval", "measure of one tile or edge");
  eval->add_option("file", file, file_help)->required();
  eval->add_option("-k", k, "level")->required();
  eval->add_option("--kind", kind, "xi, rho or sigma")->required()->check(CLI::IsMember({"xi", "rho", "sigma"}));
  auto* tile_opt = eval->add_option("--tile", tile, "tile address, e.g. b/0.2");
  auto* edge_opt = eval->add_option("--edge", edge, "edge as ADDRESS:INDEX");
  tile_opt->excludes(edge_opt);
  eval->add_option("--boundary", boundary, "include or exclude atoms on the boundary")
      ->check(CLI::IsMember({"include", "exclude"}))
      ->capture_default_str();

  auto* converge = app.add_subcommand("converge", "gaps to the area measure across levels");
  converge->add_option("file", file, file_help)->required();
  converge->add_option("--tiles", tiles, "comma-separated tile addresses");
  converge->add_option("--edges", edges, "comma-separated ADDRESS:INDEX edges");
  converge->add_option("--kmax", kmax, "deepest level")->required();
  converge->add_option("--csv", csv, "write all rows as CSV ('-' for stdout)");

  auto* bratteli = app.add_subcommand("bratteli", "Bratteli diagram and the pushforward check");
  bratteli->add_option("file", file, file_help)->required();
  bratteli->add_option("--depth", depth, "path depth")->capture_default_str();
  bratteli->add_flag("--check-pushforward", check, "compare cylinder measures with tile areas");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*spectral) return cmd_spectral(file, kmax);
    if (*generate) return cmd_generate(file, k, svg, list);
    if (*measure) return cmd_measure(file, k, kind, csv, svg);
    if (*eval) {
      if (tile.empty() == edge.empty()) {
        std::cerr << "error: give exactly one of --tile or --edge\n";
        return kUsage;
      }
      return cmd_eval(file, k, kind, tile, edge, boundary);
    }
    if (*converge) {
      if (tiles.empty() && edges.empty()) {
        std::cerr << "error: give --tiles and/or --edges\n";
        return kUsage;
      }
      return cmd_converge(file, tiles, edges, kmax, csv);
    }
    if (*bratteli) return cmd_bratteli(file, depth, check);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
