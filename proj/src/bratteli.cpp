#include "tilemeasure/bratteli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "tilemeasure/errors.hpp"
#include "tilemeasure/measures.hpp"

namespace tilemeasure {

BratteliDiagram::BratteliDiagram(const SubstitutionSystem& sys)
    : n_(sys.size()), outgoing_(sys.size()), multiplicity_(sys.size()) {
  for (std::size_t j = 0; j < n_; ++j) {
    const auto& rule = sys.rule(j);
    for (std::size_t d = 0; d < rule.size(); ++d) {
      outgoing_[j].push_back(edges_.size());
      edges_.push_back(BratteliEdge{j, rule[d].child, d});
      ++multiplicity_(rule[d].child, j);
    }
  }
}

BratteliDiagram diagram_from_system(const SubstitutionSystem& sys) { return BratteliDiagram(sys); }

void check_path(const BratteliDiagram& diag, const FinitePath& path) {
  if (path.root >= diag.vertices_per_level()) throw std::invalid_argument("path root out of range");
  std::size_t at = path.root;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    if (path.edges[i] >= diag.edge_count()) throw std::invalid_argument("path edge id out of range");
    const auto& e = diag.edge(path.edges[i]);
    if (e.source != at) {
      throw std::invalid_argument("path edge " + std::to_string(i) + " does not start where the previous edge ends");
    }
    at = e.range;
  }
}

std::size_t terminal_vertex(const BratteliDiagram& diag, const FinitePath& path) {
  check_path(diag, path);
  return path.edges.empty() ? path.root : diag.edge(path.edges.back()).range;
}

FinitePath path_from_address(const BratteliDiagram& diag, const TileAddress& address) {
  FinitePath path{address.root, {}};
  std::size_t at = address.root;
  for (const auto d : address.digits) {
    const auto& out = diag.outgoing(at);
    if (d >= out.size()) throw std::invalid_argument("address digit out of range");
    path.edges.push_back(out[d]);
    at = diag.edge(out[d]).range;
  }
  return path;
}

TileAddress address_from_path(const BratteliDiagram& diag, const FinitePath& path) {
  check_path(diag, path);
  TileAddress address{path.root, {}};
  for (const auto id : path.edges) address.digits.push_back(static_cast<std::uint16_t>(diag.edge(id).label));
  return address;
}

double cylinder_measure(const BratteliDiagram& diag, const FinitePath& path, const SpectralData& spectral) {
  const std::size_t r = terminal_vertex(diag, path);
  return std::pow(spectral.gamma, -static_cast<double>(path.depth())) * spectral.v_left.at(r);
}

Tile path_to_tile(const SubstitutionSystem& sys, const BratteliDiagram& diag, const FinitePath& path) {
  return tile_at(sys, address_from_path(diag, path));
}

std::vector<FinitePath> enumerate_paths(const BratteliDiagram& diag, std::size_t depth) {
  std::vector<FinitePath> current;
  for (std::size_t v = 0; v < diag.vertices_per_level(); ++v) current.push_back(FinitePath{v, {}});
  for (std::size_t step = 0; step < depth; ++step) {
    std::vector<FinitePath> next;
    for (const auto& p : current) {
      const std::size_t at = p.edges.empty() ? p.root : diag.edge(p.edges.back()).range;
      for (const auto id : diag.outgoing(at)) {
        FinitePath q = p;
        q.edges.push_back(id);
        next.push_back(std::move(q));
      }
    }
    current = std::move(next);
  }
  return current;
}

PushforwardReport pushforward_check(const SubstitutionSystem& sys, const BratteliDiagram& diag,
                                    const SpectralData& spectral, std::size_t depth,
                                    const GenerateOptions& options) {
  const BigInt deepest = count_tiles(diag.multiplicity(), depth);
  if (deepest > options.max_tiles) {
    throw ResourceError("depth " + std::to_string(depth) + " has " + deepest.str() +
                        " paths, above the cap of " + std::to_string(options.max_tiles));
  }

  PushforwardReport report;
  for (std::size_t n = 0; n <= depth; ++n) {
    PushforwardDepthRow row;
    row.depth = n;
    const auto paths = enumerate_paths(diag, n);
    row.paths = paths.size();

    std::map<std::size_t, std::pair<double, double>> area_range;  // terminal -> (min, max)
    PatchLevel level;
    level.k = n;
    for (const auto& path : paths) {
      const double mu = cylinder_measure(diag, path, spectral);
      const Tile tile = path_to_tile(sys, diag, path);
      const Polygon g = tile.geometry(sys);
      row.cylinder_sum += mu;
      row.max_deviation = std::max(row.max_deviation, std::abs(mu - g.area()));

      const std::size_t r = terminal_vertex(diag, path);
      auto [it, fresh] = area_range.try_emplace(r, g.area(), g.area());
      if (!fresh) {
        it->second.first = std::min(it->second.first, g.area());
        it->second.second = std::max(it->second.second, g.area());
      }

      double extensions = 0.0;
      for (const auto id : diag.outgoing(r)) {
        FinitePath ext = path;
        ext.edges.push_back(id);
        extensions += cylinder_measure(diag, ext, spectral);
        const Polygon child = path_to_tile(sys, diag, ext).geometry(sys);
        row.max_containment_defect =
            std::max(row.max_containment_defect, child.area() - intersection_area(child, g));
      }
      row.max_tower_residual = std::max(row.max_tower_residual, std::abs(mu - extensions));
      level.tiles.push_back(tile);
    }
    for (const auto& [r, range] : area_range) {
      row.max_terminal_spread = std::max(row.max_terminal_spread, range.second - range.first);
    }
    row.max_boundary_multiplicity = collect_vertices(sys, level).max_incidence;
    report.max_deviation = std::max(report.max_deviation, row.max_deviation);
    report.rows.push_back(row);
  }

  report.passed = report.max_deviation <= kPushforwardTolerance;
  for (const auto& row : report.rows) {
    report.passed = report.passed && std::abs(row.cylinder_sum - 1.0) <= kPushforwardTolerance &&
                    row.max_tower_residual <= 1e-12 && row.max_terminal_spread <= kPushforwardTolerance &&
                    row.max_containment_defect <= kPushforwardTolerance;
  }
  return report;
}

}  // namespace tilemeasure
