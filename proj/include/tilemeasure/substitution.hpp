#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilemeasure/geometry.hpp"

namespace tilemeasure {

struct Prototile {
  std::string label;
  Polygon shape;
  Point puncture;
  std::size_t index = 0;
};

/// One copy in the substitution of a prototile: maps the child prototile's shape into
/// lambda times the parent's shape.
struct ChildPlacement {
  std::size_t child = 0;
  Isometry placement;
};

struct SystemStats {
  double min_edge = 0.0;   ///< shortest prototile edge
  double diameter = 0.0;   ///< diameter of the union of prototiles
  double merge_eps = 0.0;  ///< vertex identification tolerance, 1e-7 * diameter
  double total_area = 0.0;
};

/// Prototiles, scaling factor and rules. Immutable once constructed.
class SubstitutionSystem {
 public:
  /// Structural checks only (labels, indices, lambda > 1, interior punctures); geometric
  /// consistency of the rules is reported by validate().
  SubstitutionSystem(std::string name, std::vector<Prototile> prototiles, double lambda,
                     std::vector<std::vector<ChildPlacement>> rules);

  const std::string& name() const { return name_; }
  std::size_t size() const { return prototiles_.size(); }
  const std::vector<Prototile>& prototiles() const { return prototiles_; }
  const Prototile& prototile(std::size_t i) const { return prototiles_.at(i); }
  double lambda() const { return lambda_; }
  const std::vector<std::vector<ChildPlacement>>& rules() const { return rules_; }
  const std::vector<ChildPlacement>& rule(std::size_t parent) const { return rules_.at(parent); }
  const SystemStats& stats() const { return stats_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Child map in the fixed-support frame: x -> lambda^{-1} placement(x).
  const Similarity& child_map(std::size_t parent, std::size_t digit) const {
    return child_maps_[parent][digit];
  }

 private:
  std::string name_;
  std::vector<Prototile> prototiles_;
  double lambda_;
  std::vector<std::vector<ChildPlacement>> rules_;
  std::vector<std::vector<Similarity>> child_maps_;
  SystemStats stats_;
};

// ---------------------------------------------------------------------------
// Assembly from file-frame descriptions

struct PrototileDraft {
  std::string label;
  std::vector<Point> vertices;
  std::optional<Point> puncture;
};

/// Reflection across the x-axis (optional), rotation by `angle`, then translation; all
/// in the coordinates the prototiles were written in.
struct PlacementDraft {
  std::string child;
  double angle = 0.0;
  bool reflect = false;
  Point translate{};
};

struct RuleDraft {
  std::string parent;
  std::vector<PlacementDraft> children;
};

struct SystemDraft {
  std::string name;
  double lambda = 0.0;
  std::vector<PrototileDraft> prototiles;
  std::vector<RuleDraft> rules;
};

/// Builds a system from a draft. Prototiles that overlap or touch are laid out along +x
/// with one-diameter gaps, and all shapes are scaled uniformly so the total area is 1;
/// placements and punctures are carried into the new frame. Throws SystemError.
SubstitutionSystem assemble_system(const SystemDraft& draft);

// ---------------------------------------------------------------------------
// Validation

struct PrototileCheck {
  std::string label;
  double area_residual = 0.0;    ///< |sum child areas - lambda^2 area(p)| / (lambda^2 area(p))
  double max_child_overlap = 0.0;  ///< largest pairwise child intersection area (lambda frame)
  double coverage_deficit = 0.0;   ///< relative area of lambda p not covered by children
  std::size_t vertices_outside = 0;
  bool passed = false;
};

struct ValidationReport {
  bool passed = false;
  double total_area = 0.0;
  double max_prototile_overlap = 0.0;
  std::vector<PrototileCheck> prototiles;
  std::vector<std::string> problems;
};

inline constexpr double kAreaTolerance = 1e-9;

ValidationReport validate(const SubstitutionSystem& sys);
std::string format_report(const ValidationReport& report);

/// Smallest M with A^M entrywise positive, or nullopt when the substitution is not primitive.
std::optional<unsigned> primitivity_exponent(const SubstitutionSystem& sys);

// ---------------------------------------------------------------------------
// Levels

/// Root prototile plus one digit per substitution step; digit j indexes the rule list of
/// the prototile reached after j steps.
struct TileAddress {
  std::size_t root = 0;
  std::vector<std::uint16_t> digits;

  std::size_t level() const { return digits.size(); }
  bool is_prefix_of(const TileAddress& other) const;
  TileAddress prefix(std::size_t level) const;
  friend bool operator==(const TileAddress&, const TileAddress&) = default;
  friend auto operator<=>(const TileAddress&, const TileAddress&) = default;
};

/// `label/d1.d2...`; the bare label (or `label/`) addresses the prototile itself.
std::string format_address(const SubstitutionSystem& sys, const TileAddress& address);
/// Throws std::invalid_argument on malformed text, unknown labels or out-of-range digits.
TileAddress parse_address(const SubstitutionSystem& sys, std::string_view text);

struct Tile {
  TileAddress address;
  std::size_t type = 0;
  Similarity map;  ///< prototile `type` -> this tile, in the fixed-support frame
  Point puncture;

  std::size_t level() const { return address.level(); }
  double scale() const { return map.scale(); }
  /// The expanded-frame isometry with geometry = scale() * placement(shape).
  Isometry placement() const;
  Polygon geometry(const SubstitutionSystem& sys) const;
};

struct PatchLevel {
  std::size_t k = 0;
  std::vector<Tile> tiles;  ///< lexicographic address order
};

struct GenerateOptions {
  std::uint64_t max_tiles = 5'000'000;
};

/// Every tile of level k. Throws ResourceError when the projected count exceeds the cap.
PatchLevel generate_level(const SubstitutionSystem& sys, std::size_t k,
                          const GenerateOptions& options = {});
/// Tiles of level `k` whose addresses extend `t`'s (just `t` when k == t.level()).
std::vector<Tile> subtile_of(const SubstitutionSystem& sys, const Tile& t, std::size_t k,
                             const GenerateOptions& options = {});
/// The tile with the given address. Throws std::invalid_argument on invalid digits.
Tile tile_at(const SubstitutionSystem& sys, const TileAddress& address);
/// Tiles whose closure lies within `eps` of the closed region (defaults to merge_eps).
std::vector<Tile> tiles_meeting_region(const SubstitutionSystem& sys, const PatchLevel& level,
                                       const Polygon& region, std::optional<double> eps = {});

}  // namespace tilemeasure
