#pragma once

#include <cstdint>
#include <vector>

#include "tilemeasure/spectral.hpp"
#include "tilemeasure/substitution.hpp"

namespace tilemeasure {

/// One edge between consecutive levels: the copy `label` (a rule digit) of prototile
/// `range` inside the substitution of prototile `source`.
struct BratteliEdge {
  std::size_t source = 0;
  std::size_t range = 0;
  std::size_t label = 0;
};

/// Stationary Bratteli diagram whose edge pattern between consecutive levels is given by
/// the substitution rules. Edge ids are dense; edges leaving a vertex are stored in digit
/// order so a path's labels are exactly a tile address.
class BratteliDiagram {
 public:
  explicit BratteliDiagram(const SubstitutionSystem& sys);

  std::size_t vertices_per_level() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const BratteliEdge& edge(std::size_t id) const { return edges_.at(id); }
  /// Ids of the edges with the given source, in label order.
  const std::vector<std::size_t>& outgoing(std::size_t vertex) const { return outgoing_.at(vertex); }
  std::size_t edge_id(std::size_t source, std::size_t label) const { return outgoing_.at(source).at(label); }
  const SubstitutionMatrix& multiplicity() const { return multiplicity_; }

 private:
  std::size_t n_;
  std::vector<BratteliEdge> edges_;
  std::vector<std::vector<std::size_t>> outgoing_;
  SubstitutionMatrix multiplicity_;
};

BratteliDiagram diagram_from_system(const SubstitutionSystem& sys);

/// Finite path starting at `root`; consecutive edges satisfy r(x_i) = s(x_{i+1}).
struct FinitePath {
  std::size_t root = 0;
  std::vector<std::size_t> edges;

  std::size_t depth() const { return edges.size(); }
};

/// Throws std::invalid_argument unless the path is well formed in `diag`.
void check_path(const BratteliDiagram& diag, const FinitePath& path);
/// r(x_n), or the root for the empty path.
std::size_t terminal_vertex(const BratteliDiagram& diag, const FinitePath& path);
FinitePath path_from_address(const BratteliDiagram& diag, const TileAddress& address);
TileAddress address_from_path(const BratteliDiagram& diag, const FinitePath& path);

/// gamma^{-n} v_L(r(x_n)), the invariant measure of the cylinder set of `path`.
double cylinder_measure(const BratteliDiagram& diag, const FinitePath& path, const SpectralData& spectral);
/// The tile whose address is the path's label sequence.
Tile path_to_tile(const SubstitutionSystem& sys, const BratteliDiagram& diag, const FinitePath& path);

/// Every path of exactly `depth` edges, in lexicographic (address) order.
std::vector<FinitePath> enumerate_paths(const BratteliDiagram& diag, std::size_t depth);

struct PushforwardDepthRow {
  std::size_t depth = 0;
  std::size_t paths = 0;
  double cylinder_sum = 0.0;       ///< sum of cylinder measures over all depth-n paths
  double max_deviation = 0.0;      ///< max |mu(C) - area(psi(C))|
  double max_tower_residual = 0.0; ///< max |mu(C) - sum of one-edge extensions|
  double max_terminal_spread = 0.0;  ///< max area spread among tiles with equal terminal vertex
  double max_containment_defect = 0.0;  ///< max area(child) - area(child ∩ parent)
  std::uint32_t max_boundary_multiplicity = 0;  ///< most depth-n tiles sharing one vertex
};

struct PushforwardReport {
  std::vector<PushforwardDepthRow> rows;
  double max_deviation = 0.0;
  bool passed = false;
};

inline constexpr double kPushforwardTolerance = 1e-9;

/// Compares both sides of the pushforward identity on every path of length <= depth.
PushforwardReport pushforward_check(const SubstitutionSystem& sys, const BratteliDiagram& diag,
                                    const SpectralData& spectral, std::size_t depth,
                                    const GenerateOptions& options = {});

}  // namespace tilemeasure
