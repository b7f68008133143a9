#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "tilemeasure/errors.hpp"
#include "tilemeasure/measures.hpp"
#include "tilemeasure/substitution.hpp"

namespace tilemeasure {

// ---------------------------------------------------------------------------
// Constant expressions

/// Raised for bad expressions. `position` is the 0-based offset into the source.
class ExprError : public std::invalid_argument {
 public:
  enum class Kind { syntax, domain };
  ExprError(Kind kind, std::size_t position, const std::string& what);
  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Evaluates + - * / with the usual precedence, unary minus, parentheses, sqrt(...), and
/// the constants phi and pi. Throws ExprError.
double eval_expr(std::string_view src);

// ---------------------------------------------------------------------------
// System files

/// Malformed system document. Line and column are 1-based; zero when the problem is not
/// tied to a place in the text.
class ParseError : public SystemError {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A parsed system together with its validation outcome. Parsing succeeds even when the
/// rules are geometrically inconsistent; check report.passed.
struct ParsedSystem {
  SubstitutionSystem system;
  ValidationReport report;
};

/// The draft described by a JSON system document. Throws ParseError.
SystemDraft parse_draft(std::string_view text);
ParsedSystem parse_system(std::string_view text);
ParsedSystem load_system_file(const std::filesystem::path& path);

/// JSON document for `sys` in its own (normalized) frame; numbers are written as
/// 17-digit strings so a re-parse reproduces the system.
std::string serialize_system(const SubstitutionSystem& sys);

/// Same labels, lambda, shapes, punctures and placements up to `tol`.
bool structurally_equal(const SubstitutionSystem& a, const SubstitutionSystem& b, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Built-in systems

/// Robinson-triangle Penrose substitution: acute a, b and obtuse c, d, scale phi.
SystemDraft penrose_draft();
/// Unit square cut into four quarters, scale 2.
SystemDraft square4_draft();
/// L-tromino (chair) with two reflected children, scale 2.
SystemDraft chair_draft();
/// Two squares that each subdivide only into copies of themselves (not primitive).
SystemDraft split_squares_draft();

/// "penrose", "square4", "chair" or "split-squares". Throws std::invalid_argument.
SubstitutionSystem builtin_system(std::string_view name);

/// `builtin:NAME` or a path to a system file.
ParsedSystem load_system(std::string_view source);

// ---------------------------------------------------------------------------
// Output

/// `kind,k,x,y,weight_num,weight_den,weight_real`, one row per atom.
void write_csv(const DiscreteMeasure& mu, std::ostream& out);
void export_csv(const DiscreteMeasure& mu, const std::filesystem::path& path);

/// Rows `k,target,kind,num,den,value,lebesgue,gap` followed by edge rows with target
/// `edge:<i>`.
void write_convergence_csv(const SubstitutionSystem& sys, const ConvergenceReport& report, std::ostream& out);

/// One polygon per tile and one circle per atom (radius proportional to sqrt(weight)).
void write_svg(const SubstitutionSystem& sys, const PatchLevel& level,
               std::span<const DiscreteMeasure> measures, std::ostream& out);
void render_svg(const SubstitutionSystem& sys, const PatchLevel& level,
                std::span<const DiscreteMeasure> measures, const std::filesystem::path& path);

}  // namespace tilemeasure
