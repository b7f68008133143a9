#pragma once

#include <filesystem>
#include <numbers>
#include <random>

#include "tilemeasure/io.hpp"
#include "tilemeasure/substitution.hpp"

namespace testing {

inline constexpr double kPhi = std::numbers::phi;

inline std::filesystem::path systems_dir() { return TILEMEASURE_SYSTEMS_DIR; }

// Built systems are cached; construction runs validation-grade geometry.
inline const tilemeasure::SubstitutionSystem& penrose() {
  static const auto sys = tilemeasure::builtin_system("penrose");
  return sys;
}
inline const tilemeasure::SubstitutionSystem& square4() {
  static const auto sys = tilemeasure::builtin_system("square4");
  return sys;
}
inline const tilemeasure::SubstitutionSystem& chair() {
  static const auto sys = tilemeasure::builtin_system("chair");
  return sys;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240917);
  return gen;
}

inline tilemeasure::Polygon unit_square() { return tilemeasure::Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace testing
