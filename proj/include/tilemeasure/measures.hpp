#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tilemeasure/geometry.hpp"
#include "tilemeasure/kernels.hpp"
#include "tilemeasure/spectral.hpp"
#include "tilemeasure/substitution.hpp"

namespace tilemeasure {

enum class MeasureKind { xi, rho, sigma };
enum class BoundaryPolicy { include, exclude };

std::string_view to_string(MeasureKind kind);
/// Throws std::invalid_argument for anything but "xi", "rho", "sigma".
MeasureKind parse_measure_kind(std::string_view text);

/// Non-negative rational with 64-bit parts.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Fraction reduced() const;
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return static_cast<unsigned __int128>(a.num) * b.den == static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// Finite weighted point set; atom i carries weight numerators[i] / denominator.
class DiscreteMeasure {
 public:
  DiscreteMeasure(MeasureKind kind, std::size_t level, std::vector<double> xs, std::vector<double> ys,
                  std::vector<std::uint32_t> numerators, std::uint64_t denominator, double eps);

  MeasureKind kind() const { return kind_; }
  std::size_t level() const { return level_; }
  std::size_t size() const { return xs_.size(); }
  Point position(std::size_t i) const { return {xs_[i], ys_[i]}; }
  Fraction weight(std::size_t i) const { return {numerators_[i], denominator_}; }
  std::uint64_t denominator() const { return denominator_; }
  const std::vector<std::uint32_t>& numerators() const { return numerators_; }
  kernels::PointsView points() const { return {xs_.data(), ys_.data(), xs_.size()}; }
  /// Distance under which an atom counts as lying on a region's boundary.
  double eps() const { return eps_; }
  Fraction total() const;

 private:
  MeasureKind kind_;
  std::size_t level_;
  std::vector<double> xs_, ys_;
  std::vector<std::uint32_t> numerators_;
  std::uint64_t denominator_;
  double eps_;
};

/// Distinct vertices of a level with the number of tile incidences at each.
struct VertexTable {
  std::vector<Point> positions;
  std::vector<std::uint32_t> incidences;
  std::uint64_t total_incidences = 0;
  std::uint32_t max_incidence = 0;
};

VertexTable collect_vertices(const SubstitutionSystem& sys, const PatchLevel& level);

DiscreteMeasure build_xi(const SubstitutionSystem& sys, const PatchLevel& level);
DiscreteMeasure build_rho(const SubstitutionSystem& sys, const PatchLevel& level);
DiscreteMeasure build_sigma(const SubstitutionSystem& sys, const PatchLevel& level);
DiscreteMeasure build_rho(const SubstitutionSystem& sys, const PatchLevel& level, const VertexTable& vertices);
DiscreteMeasure build_sigma(const SubstitutionSystem& sys, const PatchLevel& level, const VertexTable& vertices);
DiscreteMeasure build_measure(const SubstitutionSystem& sys, const PatchLevel& level, MeasureKind kind);

/// Mass of the atoms inside `region` (plus those on its boundary when included).
Fraction evaluate(const DiscreteMeasure& mu, const Polygon& region,
                  BoundaryPolicy policy = BoundaryPolicy::include);

struct EdgeRef {
  TileAddress tile;
  std::size_t edge_index = 0;
  Point a, b;
};

/// Throws std::invalid_argument when the edge index exceeds the tile's edge count.
EdgeRef make_edge_ref(const SubstitutionSystem& sys, const TileAddress& tile, std::size_t edge_index);
/// Mass of the atoms within eps of the closed segment.
Fraction evaluate_on_edge(const DiscreteMeasure& mu, const EdgeRef& edge);

/// lambda^{-2j} v_L(s) for a level-j tile of type s.
double lebesgue_of_tile(const SubstitutionSystem& sys, const SpectralData& spectral, const Tile& t);

struct ConvergenceTarget {
  Tile tile;
  double lebesgue = 0.0;  ///< from the eigenvector
  double area = 0.0;      ///< shoelace area of the tile geometry
};

struct ConvergenceRow {
  std::size_t k = 0;
  std::size_t target = 0;
  Fraction xi, rho, sigma;
  double gap_xi = 0.0, gap_rho = 0.0, gap_sigma = 0.0;  ///< |mu_k(t) - m(t)|
  double rel_gap_xi = 0.0, rel_gap_rho = 0.0, rel_gap_sigma = 0.0;  ///< gap / m(t)
};

struct EdgeRow {
  std::size_t k = 0;
  std::size_t edge = 0;
  Fraction rho;
};

struct ConvergenceReport {
  std::vector<ConvergenceTarget> targets;
  std::vector<EdgeRef> edges;
  std::vector<ConvergenceRow> rows;
  std::vector<EdgeRow> edge_rows;

  /// Largest gap over all targets at level k for the given kind.
  double max_gap(MeasureKind kind, std::size_t k) const;
};

/// Closed-tile evaluation of xi_k, rho_k and sigma_k on every target for k = 0..k_max, and
/// rho_k on every edge.
ConvergenceReport convergence_report(const SubstitutionSystem& sys, const SpectralData& spectral,
                                     const std::vector<TileAddress>& targets,
                                     const std::vector<EdgeRef>& edges, std::size_t k_max,
                                     const GenerateOptions& options = {});

}  // namespace tilemeasure
