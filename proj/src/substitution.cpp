#include "tilemeasure/substitution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tilemeasure/errors.hpp"
#include "tilemeasure/spectral.hpp"

namespace tilemeasure {
namespace {

constexpr std::size_t kMaxRuleLength = 65535;

bool label_is_valid(std::string_view label) {
  if (label.empty()) return false;
  return label.find_first_of("/:,. \t\n") == std::string_view::npos;
}

Similarity shrink(const Isometry& h, double lambda) {
  const double inv = 1.0 / lambda;
  const Mat2& q = h.linear();
  return {Mat2{inv * q.a, inv * q.b, inv * q.c, inv * q.d}, inv * h.translation()};
}

void expand(const SubstitutionSystem& sys, const Tile& tile, std::size_t remaining,
            std::vector<Tile>& out) {
  if (remaining == 0) {
    out.push_back(tile);
    return;
  }
  const auto& rule = sys.rule(tile.type);
  for (std::size_t d = 0; d < rule.size(); ++d) {
    Tile child;
    child.address = tile.address;
    child.address.digits.push_back(static_cast<std::uint16_t>(d));
    child.type = rule[d].child;
    child.map = tile.map.compose(sys.child_map(tile.type, d));
    child.puncture = child.map.apply(sys.prototile(child.type).puncture);
    expand(sys, child, remaining - 1, out);
  }
}

Tile root_tile(const SubstitutionSystem& sys, std::size_t root) {
  Tile t;
  t.address.root = root;
  t.type = root;
  t.map = Similarity{};
  t.puncture = sys.prototile(root).puncture;
  return t;
}

void check_budget(const BigInt& projected, std::uint64_t cap, std::size_t k) {
  if (projected > cap) {
    throw ResourceError("level " + std::to_string(k) + " would contain " + projected.str() +
                        " tiles, above the cap of " + std::to_string(cap));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SubstitutionSystem

SubstitutionSystem::SubstitutionSystem(std::string name, std::vector<Prototile> prototiles,
                                       double lambda, std::vector<std::vector<ChildPlacement>> rules)
    : name_(std::move(name)),
      prototiles_(std::move(prototiles)),
      lambda_(lambda),
      rules_(std::move(rules)) {
  const std::size_t n = prototiles_.size();
  if (n == 0) throw SystemError("a substitution system needs at least one prototile");
  if (!std::isfinite(lambda_) || lambda_ <= 1.0) throw SystemError("lambda must be > 1");
  if (rules_.size() != n) throw SystemError("one rule per prototile is required");

  std::set<std::string, std::less<>> labels;
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = prototiles_[i];
    p.index = i;
    if (!label_is_valid(p.label)) throw SystemError("invalid prototile label '" + p.label + "'");
    if (!labels.insert(p.label).second) throw SystemError("duplicate prototile label '" + p.label + "'");
  }

  std::vector<Polygon> shapes;
  for (const auto& p : prototiles_) shapes.push_back(p.shape);
  stats_.min_edge = min_edge_length(shapes);
  stats_.diameter = diameter(shapes);
  stats_.merge_eps = 1e-7 * stats_.diameter;
  for (const auto& s : shapes) stats_.total_area += s.area();

  for (const auto& p : prototiles_) {
    if (point_in_polygon(p.puncture, p.shape, stats_.merge_eps) != Location::inside) {
      throw SystemError("puncture of prototile '" + p.label + "' is not interior");
    }
  }

  child_maps_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& rule = rules_[j];
    if (rule.empty()) throw SystemError("rule for '" + prototiles_[j].label + "' is empty");
    if (rule.size() > kMaxRuleLength) throw SystemError("rule too long");
    for (const auto& c : rule) {
      if (c.child >= n) throw SystemError("rule child index out of range");
      child_maps_[j].push_back(shrink(c.placement, lambda_));
    }
  }
}

std::optional<std::size_t> SubstitutionSystem::index_of(std::string_view label) const {
  for (const auto& p : prototiles_) {
    if (p.label == label) return p.index;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Assembly

SubstitutionSystem assemble_system(const SystemDraft& draft) {
  const std::size_t n = draft.prototiles.size();
  if (n == 0) throw SystemError("no prototiles");
  if (!std::isfinite(draft.lambda) || draft.lambda <= 1.0) throw SystemError("lambda must be > 1");

  std::map<std::string, std::size_t, std::less<>> index;
  std::vector<Polygon> shapes;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = draft.prototiles[i];
    if (!index.emplace(p.label, i).second) throw SystemError("duplicate prototile label '" + p.label + "'");
    try {
      shapes.emplace_back(p.vertices);
    } catch (const GeometryError& e) {
      throw SystemError("prototile '" + p.label + "': " + e.what());
    }
  }

  double total = 0.0;
  for (const auto& s : shapes) total += s.area();
  const double s = std::abs(total - 1.0) <= 1e-12 ? 1.0 : 1.0 / std::sqrt(total);
  for (auto& shape : shapes) shape = scale_polygon(s, shape);

  // Lay prototiles out along +x unless they are already pairwise disjoint.
  const double tol = 1e-7 * diameter(shapes);
  bool disjoint = true;
  for (std::size_t i = 0; i < n && disjoint; ++i) {
    for (std::size_t j = i + 1; j < n && disjoint; ++j) {
      if (polygon_distance(shapes[i], shapes[j]) <= tol) disjoint = false;
    }
  }
  std::vector<Point> offsets(n);
  if (!disjoint) {
    double gap = 0.0;
    for (const auto& shape : shapes) gap = std::max(gap, diameter(std::span(&shape, 1)));
    double cursor = shapes[0].bounds().min_x;
    for (std::size_t i = 0; i < n; ++i) {
      offsets[i] = {cursor - shapes[i].bounds().min_x, 0.0};
      cursor += shapes[i].bounds().width() + gap;
    }
  }

  std::vector<Prototile> prototiles;
  for (std::size_t i = 0; i < n; ++i) {
    Polygon placed = translate_polygon(offsets[i], shapes[i]);
    const auto& file_puncture = draft.prototiles[i].puncture;
    const Point puncture = file_puncture ? s * *file_puncture + offsets[i] : centroid(placed);
    prototiles.push_back(Prototile{draft.prototiles[i].label, std::move(placed), puncture, i});
  }

  std::vector<std::vector<ChildPlacement>> rules(n);
  std::vector<bool> seen(n, false);
  for (const auto& rule : draft.rules) {
    const auto parent = index.find(rule.parent);
    if (parent == index.end()) throw SystemError("rule for unknown prototile '" + rule.parent + "'");
    if (seen[parent->second]) throw SystemError("duplicate rule for '" + rule.parent + "'");
    seen[parent->second] = true;
    for (const auto& c : rule.children) {
      const auto child = index.find(c.child);
      if (child == index.end()) {
        throw SystemError("rule for '" + rule.parent + "' references unknown prototile '" + c.child + "'");
      }
      const Mat2 q = Isometry::from_parts(c.angle, c.reflect, {}).linear();
      const Point t = q * (-1.0 * offsets[child->second]) + s * c.translate +
                      draft.lambda * offsets[parent->second];
      rules[parent->second].push_back(ChildPlacement{child->second, Isometry(q, t)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) throw SystemError("no rule for prototile '" + draft.prototiles[i].label + "'");
  }
  return SubstitutionSystem(draft.name, std::move(prototiles), draft.lambda, std::move(rules));
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate(const SubstitutionSystem& sys) {
  ValidationReport report;
  const double lambda = sys.lambda();
  const auto& protos = sys.prototiles();

  report.total_area = sys.stats().total_area;
  if (std::abs(report.total_area - 1.0) > kAreaTolerance) {
    report.problems.push_back("total prototile area is " + std::to_string(report.total_area) +
                              ", expected 1");
  }
  for (std::size_t i = 0; i < protos.size(); ++i) {
    for (std::size_t j = i + 1; j < protos.size(); ++j) {
      report.max_prototile_overlap =
          std::max(report.max_prototile_overlap, intersection_area(protos[i].shape, protos[j].shape));
    }
  }
  if (report.max_prototile_overlap > kAreaTolerance) {
    report.problems.push_back("prototile supports overlap");
  }

  const double eps = lambda * sys.stats().merge_eps;
  bool all_passed = report.problems.empty();
  for (const auto& parent : protos) {
    PrototileCheck check;
    check.label = parent.label;
    const Polygon target = scale_polygon(lambda, parent.shape);
    const double target_area = target.area();

    std::vector<Polygon> children;
    double child_area = 0.0;
    for (const auto& c : sys.rule(parent.index)) {
      children.push_back(apply_isometry(c.placement, sys.prototile(c.child).shape));
      child_area += children.back().area();
    }
    check.area_residual = std::abs(child_area - target_area) / target_area;

    double pairwise = 0.0;
    for (std::size_t a = 0; a < children.size(); ++a) {
      for (std::size_t b = a + 1; b < children.size(); ++b) {
        const double o = intersection_area(children[a], children[b]);
        pairwise += o;
        check.max_child_overlap = std::max(check.max_child_overlap, o);
      }
    }
    double covered = -pairwise;
    for (const auto& c : children) {
      covered += intersection_area(c, target);
      for (const auto& v : c.vertices()) {
        if (point_in_polygon(v, target, eps) == Location::outside) ++check.vertices_outside;
      }
    }
    check.coverage_deficit = std::max(0.0, (target_area - covered) / target_area);

    check.passed = check.area_residual <= kAreaTolerance &&
                   check.max_child_overlap <= kAreaTolerance * target_area &&
                   check.coverage_deficit <= kAreaTolerance && check.vertices_outside == 0;
    if (!check.passed) {
      report.problems.push_back("rule for '" + parent.label + "' does not tile lambda * '" +
                                parent.label + "'");
    }
    all_passed = all_passed && check.passed;
    report.prototiles.push_back(std::move(check));
  }
  report.passed = all_passed;
  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific;
  os << (report.passed ? "PASS" : "FAIL") << "  total area " << report.total_area
     << "  prototile overlap " << report.max_prototile_overlap << '\n';
  for (const auto& c : report.prototiles) {
    os << "  " << c.label << ": area residual " << c.area_residual << ", child overlap "
       << c.max_child_overlap << ", coverage deficit " << c.coverage_deficit
       << ", vertices outside " << c.vertices_outside << (c.passed ? "" : "  <-- fails") << '\n';
  }
  for (const auto& p : report.problems) os << "  problem: " << p << '\n';
  return os.str();
}

std::optional<unsigned> primitivity_exponent(const SubstitutionSystem& sys) {
  return primitivity_exponent(build_matrix(sys));
}

// ---------------------------------------------------------------------------
// Addresses and tiles

bool TileAddress::is_prefix_of(const TileAddress& other) const {
  return root == other.root && digits.size() <= other.digits.size() &&
         std::equal(digits.begin(), digits.end(), other.digits.begin());
}

TileAddress TileAddress::prefix(std::size_t level) const {
  TileAddress out{root, {}};
  out.digits.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(std::min(level, digits.size())));
  return out;
}

std::string format_address(const SubstitutionSystem& sys, const TileAddress& address) {
  std::string out = sys.prototile(address.root).label;
  if (!address.digits.empty()) out += '/';
  for (std::size_t i = 0; i < address.digits.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(address.digits[i]);
  }
  return out;
}

TileAddress parse_address(const SubstitutionSystem& sys, std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view label = text.substr(0, slash);
  const auto root = sys.index_of(label);
  if (!root) throw std::invalid_argument("unknown prototile label '" + std::string(label) + "'");
  TileAddress address{*root, {}};
  if (slash == std::string_view::npos) return address;

  std::string_view rest = text.substr(slash + 1);
  std::size_t type = *root;
  while (!rest.empty()) {
    const auto dot = rest.find('.');
    const std::string_view token = rest.substr(0, dot);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
      throw std::invalid_argument("malformed address digit '" + std::string(token) + "'");
    }
    if (value >= sys.rule(type).size()) {
      throw std::invalid_argument("address digit " + std::to_string(value) + " out of range for '" +
                                  sys.prototile(type).label + "'");
    }
    address.digits.push_back(static_cast<std::uint16_t>(value));
    type = sys.rule(type)[value].child;
    if (dot == std::string_view::npos) break;
    rest = rest.substr(dot + 1);
    if (rest.empty()) throw std::invalid_argument("address ends with '.'");
  }
  return address;
}

Isometry Tile::placement() const {
  const double s = scale();
  const double inv = 1.0 / s;
  const Mat2& l = map.linear;
  return Isometry(Mat2{inv * l.a, inv * l.b, inv * l.c, inv * l.d}, inv * map.offset);
}

Polygon Tile::geometry(const SubstitutionSystem& sys) const {
  return apply_similarity(map, sys.prototile(type).shape);
}

PatchLevel generate_level(const SubstitutionSystem& sys, std::size_t k, const GenerateOptions& options) {
  const BigInt projected = count_tiles(build_matrix(sys), k);
  check_budget(projected, options.max_tiles, k);
  PatchLevel level;
  level.k = k;
  level.tiles.reserve(static_cast<std::size_t>(projected));
  for (std::size_t root = 0; root < sys.size(); ++root) expand(sys, root_tile(sys, root), k, level.tiles);
  return level;
}

std::vector<Tile> subtile_of(const SubstitutionSystem& sys, const Tile& t, std::size_t k,
                             const GenerateOptions& options) {
  if (k < t.level()) throw std::invalid_argument("subtile_of: target level is above the tile");
  const BigInt projected = count_subtiles(build_matrix(sys), k - t.level(), t.type);
  check_budget(projected, options.max_tiles, k);
  std::vector<Tile> out;
  out.reserve(static_cast<std::size_t>(projected));
  expand(sys, t, k - t.level(), out);
  return out;
}

Tile tile_at(const SubstitutionSystem& sys, const TileAddress& address) {
  if (address.root >= sys.size()) throw std::invalid_argument("address root out of range");
  Tile t = root_tile(sys, address.root);
  for (const auto d : address.digits) {
    if (d >= sys.rule(t.type).size()) throw std::invalid_argument("address digit out of range");
    t.map = t.map.compose(sys.child_map(t.type, d));
    t.type = sys.rule(t.type)[d].child;
  }
  t.address = address;
  t.puncture = t.map.apply(sys.prototile(t.type).puncture);
  return t;
}

std::vector<Tile> tiles_meeting_region(const SubstitutionSystem& sys, const PatchLevel& level,
                                       const Polygon& region, std::optional<double> eps) {
  const double tol = eps.value_or(sys.stats().merge_eps);
  std::vector<Tile> out;
  for (const auto& t : level.tiles) {
    const Polygon g = t.geometry(sys);
    if (!g.bounds().overlaps(region.bounds(), tol)) continue;
    if (polygon_distance(g, region) <= tol) out.push_back(t);
  }
  return out;
}

}  // namespace tilemeasure
