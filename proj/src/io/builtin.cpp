#include <cmath>
#include <numbers>

#include "tilemeasure/io.hpp"

namespace tilemeasure {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhi = std::numbers::phi;

}  // namespace

SystemDraft penrose_draft() {
  const double s72 = std::sqrt(10.0 + 2.0 * std::sqrt(5.0)) / 4.0;  // sin 72°
  const double s36 = std::sqrt(10.0 - 2.0 * std::sqrt(5.0)) / 4.0;  // sin 36°
  const double phi2 = kPhi * kPhi;
  const std::vector<Point> acute{{0, 0}, {1 / kPhi, 0}, {1 / (2 * kPhi), s72}};
  const std::vector<Point> obtuse{{0, 0}, {kPhi, 0}, {kPhi / 2, s36}};

  SystemDraft d;
  d.name = "penrose";
  d.lambda = kPhi;
  d.prototiles = {{"a", acute, {}}, {"b", acute, {}}, {"c", obtuse, {}}, {"d", obtuse, {}}};
  d.rules = {
      {"a", {{"c", 3 * kPi / 5, false, {1, 0}}, {"a", 7 * kPi / 5, false, {1 / (2 * phi2), s36}}}},
      {"b", {{"d", 7 * kPi / 5, false, {0.5, kPhi * s72}}, {"b", 3 * kPi / 5, false, {1, 0}}}},
      {"c",
       {{"d", 0, false, {0, 0}}, {"c", 4 * kPi / 5, false, {phi2, 0}}, {"b", 6 * kPi / 5, false, {phi2 / 2, s72}}}},
      {"d",
       {{"c", 0, false, {1, 0}},
        {"d", 6 * kPi / 5, false, {phi2 / 2, s72}},
        {"a", 4 * kPi / 5, false, {1 + kPhi / 2, s36}}}},
  };
  return d;
}

SystemDraft square4_draft() {
  SystemDraft d;
  d.name = "square4";
  d.lambda = 2.0;
  d.prototiles = {{"q", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}}};
  d.rules = {{"q", {{"q", 0, false, {0, 0}}, {"q", 0, false, {1, 0}}, {"q", 0, false, {0, 1}}, {"q", 0, false, {1, 1}}}}};
  return d;
}

SystemDraft chair_draft() {
  SystemDraft d;
  d.name = "chair";
  d.lambda = 2.0;
  d.prototiles = {{"L", {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, Point{0.5, 0.5}}};
  d.rules = {{"L",
              {{"L", 0, false, {0, 0}},
               {"L", 0, false, {1, 1}},
               {"L", kPi, true, {4, 0}},
               {"L", 0, true, {0, 4}}}}};
  return d;
}

SystemDraft split_squares_draft() {
  SystemDraft d;
  d.name = "split-squares";
  d.lambda = 2.0;
  const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  d.prototiles = {{"u", square, {}}, {"v", square, {}}};
  for (const char* label : {"u", "v"}) {
    d.rules.push_back({label,
                       {{label, 0, false, {0, 0}},
                        {label, 0, false, {1, 0}},
                        {label, 0, false, {0, 1}},
                        {label, 0, false, {1, 1}}}});
  }
  return d;
}

SubstitutionSystem builtin_system(std::string_view name) {
  if (name == "penrose") return assemble_system(penrose_draft());
  if (name == "square4") return assemble_system(square4_draft());
  if (name == "chair") return assemble_system(chair_draft());
  if (name == "split-squares") return assemble_system(split_squares_draft());
  throw std::invalid_argument("unknown built-in system '" + std::string(name) + "'");
}

ParsedSystem load_system(std::string_view source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.substr(0, prefix.size()) == prefix) {
    SubstitutionSystem sys = builtin_system(source.substr(prefix.size()));
    ValidationReport report = validate(sys);
    return {std::move(sys), std::move(report)};
  }
  return load_system_file(std::filesystem::path(std::string(source)));
}

}  // namespace tilemeasure
