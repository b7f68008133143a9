#include "tilemeasure/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tilemeasure/errors.hpp"

namespace tilemeasure {
namespace {

std::uint32_t to_u32(std::uint64_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("atom weight overflow");
  return static_cast<std::uint32_t>(v);
}

// Vertex positions of every tile, flattened in tile order (tile t owns
// [offsets[t], offsets[t+1])). Computed per prototile type with the batch transform.
struct FlatVertices {
  std::vector<std::size_t> offsets;
  std::vector<double> xs, ys;
};

FlatVertices tile_vertices(const SubstitutionSystem& sys, const PatchLevel& level) {
  const auto& tiles = level.tiles;
  FlatVertices out;
  out.offsets.resize(tiles.size() + 1, 0);
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    out.offsets[t + 1] = out.offsets[t] + sys.prototile(tiles[t].type).shape.size();
  }
  out.xs.resize(out.offsets.back());
  out.ys.resize(out.offsets.back());

  const auto& kern = kernels::active_kernels();
  for (std::size_t type = 0; type < sys.size(); ++type) {
    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < tiles.size(); ++t) {
      if (tiles[t].type == type) members.push_back(t);
    }
    if (members.empty()) continue;
    const std::size_t m = members.size();
    std::vector<double> m00(m), m01(m), m10(m), m11(m), tx(m), ty(m), rx(m), ry(m);
    for (std::size_t i = 0; i < m; ++i) {
      const Similarity& f = tiles[members[i]].map;
      m00[i] = f.linear.a;
      m01[i] = f.linear.b;
      m10[i] = f.linear.c;
      m11[i] = f.linear.d;
      tx[i] = f.offset.x;
      ty[i] = f.offset.y;
    }
    const kernels::AffineBatch batch{m00.data(), m01.data(), m10.data(), m11.data(),
                                     tx.data(), ty.data(), m};
    const auto& shape = sys.prototile(type).shape;
    for (std::size_t j = 0; j < shape.size(); ++j) {
      kern.transform(batch, shape[j].x, shape[j].y, rx.data(), ry.data());
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t slot = out.offsets[members[i]] + j;
        out.xs[slot] = rx[i];
        out.ys[slot] = ry[i];
      }
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::xi: return "xi";
    case MeasureKind::rho: return "rho";
    case MeasureKind::sigma: return "sigma";
  }
  return "?";
}

MeasureKind parse_measure_kind(std::string_view text) {
  if (text == "xi") return MeasureKind::xi;
  if (text == "rho") return MeasureKind::rho;
  if (text == "sigma") return MeasureKind::sigma;
  throw std::invalid_argument("unknown measure kind '" + std::string(text) + "'");
}

Fraction Fraction::reduced() const {
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? *this : Fraction{num / g, den / g};
}

DiscreteMeasure::DiscreteMeasure(MeasureKind kind, std::size_t level, std::vector<double> xs,
                                 std::vector<double> ys, std::vector<std::uint32_t> numerators,
                                 std::uint64_t denominator, double eps)
    : kind_(kind),
      level_(level),
      xs_(std::move(xs)),
      ys_(std::move(ys)),
      numerators_(std::move(numerators)),
      denominator_(denominator),
      eps_(eps) {
  if (xs_.size() != ys_.size() || xs_.size() != numerators_.size()) {
    throw std::invalid_argument("atom arrays differ in length");
  }
  if (denominator_ == 0) throw std::invalid_argument("measure denominator must be positive");
}

Fraction DiscreteMeasure::total() const {
  std::uint64_t s = 0;
  for (const auto w : numerators_) s += w;
  return {s, denominator_};
}

VertexTable collect_vertices(const SubstitutionSystem& sys, const PatchLevel& level) {
  const FlatVertices flat = tile_vertices(sys, level);
  VertexIndex index(sys.stats().merge_eps);
  VertexTable table;
  for (std::size_t i = 0; i < flat.xs.size(); ++i) {
    const std::size_t id = index.insert({flat.xs[i], flat.ys[i]});
    if (id == table.incidences.size()) table.incidences.push_back(0);
    ++table.incidences[id];
  }
  table.positions = index.representatives();
  table.total_incidences = flat.xs.size();
  for (const auto c : table.incidences) table.max_incidence = std::max(table.max_incidence, c);
  return table;
}

DiscreteMeasure build_xi(const SubstitutionSystem& sys, const PatchLevel& level) {
  const std::size_t n = level.tiles.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = level.tiles[i].puncture.x;
    ys[i] = level.tiles[i].puncture.y;
  }
  return DiscreteMeasure(MeasureKind::xi, level.k, std::move(xs), std::move(ys),
                         std::vector<std::uint32_t>(n, 1), n, sys.stats().merge_eps);
}

DiscreteMeasure build_rho(const SubstitutionSystem& sys, const PatchLevel& level,
                          const VertexTable& vertices) {
  const std::size_t n = vertices.positions.size();
  std::vector<double> xs(n), ys(n);
  std::vector<std::uint32_t> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = vertices.positions[i].x;
    ys[i] = vertices.positions[i].y;
    w[i] = to_u32(vertices.incidences[i]);
  }
  return DiscreteMeasure(MeasureKind::rho, level.k, std::move(xs), std::move(ys), std::move(w),
                         vertices.total_incidences, sys.stats().merge_eps);
}

DiscreteMeasure build_sigma(const SubstitutionSystem& sys, const PatchLevel& level,
                            const VertexTable& vertices) {
  const std::size_t n = vertices.positions.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = vertices.positions[i].x;
    ys[i] = vertices.positions[i].y;
  }
  return DiscreteMeasure(MeasureKind::sigma, level.k, std::move(xs), std::move(ys),
                         std::vector<std::uint32_t>(n, 1), n, sys.stats().merge_eps);
}

DiscreteMeasure build_rho(const SubstitutionSystem& sys, const PatchLevel& level) {
  return build_rho(sys, level, collect_vertices(sys, level));
}

DiscreteMeasure build_sigma(const SubstitutionSystem& sys, const PatchLevel& level) {
  return build_sigma(sys, level, collect_vertices(sys, level));
}

DiscreteMeasure build_measure(const SubstitutionSystem& sys, const PatchLevel& level, MeasureKind kind) {
  switch (kind) {
    case MeasureKind::xi: return build_xi(sys, level);
    case MeasureKind::rho: return build_rho(sys, level);
    case MeasureKind::sigma: return build_sigma(sys, level);
  }
  throw std::invalid_argument("unknown measure kind");
}

Fraction evaluate(const DiscreteMeasure& mu, const Polygon& region, BoundaryPolicy policy) {
  const PreparedPolygon prepared(region);
  const std::uint64_t mass = kernels::active_kernels().weight_in_polygon(
      mu.points(), mu.numerators().data(), prepared.table(), mu.eps(),
      policy == BoundaryPolicy::include);
  return {mass, mu.denominator()};
}

EdgeRef make_edge_ref(const SubstitutionSystem& sys, const TileAddress& tile, std::size_t edge_index) {
  const Polygon g = tile_at(sys, tile).geometry(sys);
  if (edge_index >= g.size()) {
    throw std::invalid_argument("edge index " + std::to_string(edge_index) + " out of range (tile has " +
                                std::to_string(g.size()) + " edges)");
  }
  const auto [a, b] = g.edge(edge_index);
  return EdgeRef{tile, edge_index, a, b};
}

Fraction evaluate_on_edge(const DiscreteMeasure& mu, const EdgeRef& edge) {
  const kernels::Segment seg{edge.a.x, edge.a.y, edge.b.x, edge.b.y};
  const std::uint64_t mass = kernels::active_kernels().weight_near_segment(
      mu.points(), mu.numerators().data(), seg, mu.eps());
  return {mass, mu.denominator()};
}

double lebesgue_of_tile(const SubstitutionSystem& sys, const SpectralData& spectral, const Tile& t) {
  return std::pow(sys.lambda(), -2.0 * static_cast<double>(t.level())) * spectral.v_left.at(t.type);
}

double ConvergenceReport::max_gap(MeasureKind kind, std::size_t k) const {
  double worst = 0.0;
  for (const auto& r : rows) {
    if (r.k != k) continue;
    const double g = kind == MeasureKind::xi ? r.gap_xi : kind == MeasureKind::rho ? r.gap_rho : r.gap_sigma;
    worst = std::max(worst, g);
  }
  return worst;
}

ConvergenceReport convergence_report(const SubstitutionSystem& sys, const SpectralData& spectral,
                                     const std::vector<TileAddress>& targets,
                                     const std::vector<EdgeRef>& edges, std::size_t k_max,
                                     const GenerateOptions& options) {
  // Check the budget for the deepest level before doing any work.
  const BigInt deepest = count_tiles(build_matrix(sys), k_max);
  if (deepest > options.max_tiles) {
    throw ResourceError("level " + std::to_string(k_max) + " would contain " + deepest.str() +
                        " tiles, above the cap of " + std::to_string(options.max_tiles));
  }

  ConvergenceReport report;
  report.edges = edges;
  std::vector<Polygon> regions;
  for (const auto& address : targets) {
    Tile t = tile_at(sys, address);
    regions.push_back(t.geometry(sys));
    const double m = lebesgue_of_tile(sys, spectral, t);
    report.targets.push_back(ConvergenceTarget{std::move(t), m, regions.back().area()});
  }

  for (std::size_t k = 0; k <= k_max; ++k) {
    const PatchLevel level = generate_level(sys, k, options);
    const DiscreteMeasure xi = build_xi(sys, level);
    const VertexTable vertices = collect_vertices(sys, level);
    const DiscreteMeasure rho = build_rho(sys, level, vertices);
    const DiscreteMeasure sigma = build_sigma(sys, level, vertices);

    for (std::size_t i = 0; i < regions.size(); ++i) {
      ConvergenceRow row;
      row.k = k;
      row.target = i;
      row.xi = evaluate(xi, regions[i], BoundaryPolicy::include);
      row.rho = evaluate(rho, regions[i], BoundaryPolicy::include);
      row.sigma = evaluate(sigma, regions[i], BoundaryPolicy::include);
      const double m = report.targets[i].lebesgue;
      row.gap_xi = std::abs(row.xi.value() - m);
      row.gap_rho = std::abs(row.rho.value() - m);
      row.gap_sigma = std::abs(row.sigma.value() - m);
      row.rel_gap_xi = row.gap_xi / m;
      row.rel_gap_rho = row.gap_rho / m;
      row.rel_gap_sigma = row.gap_sigma / m;
      report.rows.push_back(row);
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      report.edge_rows.push_back(EdgeRow{k, e, evaluate_on_edge(rho, edges[e])});
    }
  }
  return report;
}

}  // namespace tilemeasure
