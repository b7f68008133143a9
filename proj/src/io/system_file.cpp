#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tilemeasure/io.hpp"

namespace tilemeasure {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : SystemError(line == 0 ? what
                            : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

using Json = nlohmann::ordered_json;

double number_at(const Json& v, const std::string& where) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError(where + ": value is not finite");
    return d;
  }
  if (v.is_string()) {
    try {
      return eval_expr(v.get<std::string>());
    } catch (const ExprError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  throw ParseError(where + ": expected a number or an expression string");
}

Point point_at(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) throw ParseError(where + ": expected a pair [x, y]");
  return {number_at(v[0], where + "[0]"), number_at(v[1], where + "[1]")};
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

// 1-based line and column of the byte at 1-based offset `byte`.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t stop = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

Json pair_json(Point p) { return Json::array({fmt17(p.x), fmt17(p.y)}); }

}  // namespace

SystemDraft parse_draft(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    if (const auto at = what.find("]: "); at != std::string::npos) what = what.substr(at + 3);
    throw ParseError(what, line, column);
  }
  if (!doc.is_object()) throw ParseError("top level must be an object", 1, 1);

  SystemDraft draft;
  if (const auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("name: expected a string");
    draft.name = it->get<std::string>();
  }
  draft.lambda = number_at(field(doc, "lambda", "document"), "lambda");

  const Json& protos = field(doc, "prototiles", "document");
  if (!protos.is_array() || protos.empty()) throw ParseError("prototiles: expected a non-empty array");
  for (std::size_t i = 0; i < protos.size(); ++i) {
    const std::string where = "prototiles[" + std::to_string(i) + "]";
    const Json& p = protos[i];
    if (!p.is_object()) throw ParseError(where + ": expected an object");
    PrototileDraft d;
    const Json& label = field(p, "label", where);
    if (!label.is_string()) throw ParseError(where + ".label: expected a string");
    d.label = label.get<std::string>();
    for (const auto& other : draft.prototiles) {
      if (other.label == d.label) throw ParseError(where + ": duplicate label '" + d.label + "'");
    }
    const Json& verts = field(p, "vertices", where);
    if (!verts.is_array()) throw ParseError(where + ".vertices: expected an array");
    for (std::size_t v = 0; v < verts.size(); ++v) {
      d.vertices.push_back(point_at(verts[v], where + ".vertices[" + std::to_string(v) + "]"));
    }
    if (const auto it = p.find("puncture"); it != p.end() && !it->is_null()) {
      d.puncture = point_at(*it, where + ".puncture");
    }
    draft.prototiles.push_back(std::move(d));
  }

  const Json& rules = field(doc, "rules", "document");
  if (!rules.is_object()) throw ParseError("rules: expected an object keyed by parent label");
  for (const auto& [parent, list] : rules.items()) {
    const std::string where = "rules." + parent;
    bool known = false;
    for (const auto& p : draft.prototiles) known = known || p.label == parent;
    if (!known) throw ParseError(where + ": unknown parent label '" + parent + "'");
    if (!list.is_array()) throw ParseError(where + ": expected an array of placements");
    RuleDraft rule{parent, {}};
    for (std::size_t c = 0; c < list.size(); ++c) {
      const std::string at = where + "[" + std::to_string(c) + "]";
      const Json& e = list[c];
      if (!e.is_object()) throw ParseError(at + ": expected an object");
      PlacementDraft pd;
      const Json& child = field(e, "child", at);
      if (!child.is_string()) throw ParseError(at + ".child: expected a label");
      pd.child = child.get<std::string>();
      bool resolves = false;
      for (const auto& p : draft.prototiles) resolves = resolves || p.label == pd.child;
      if (!resolves) throw ParseError(at + ": unknown child label '" + pd.child + "'");
      if (const auto it = e.find("angle"); it != e.end()) pd.angle = number_at(*it, at + ".angle");
      if (const auto it = e.find("reflect"); it != e.end()) {
        if (!it->is_boolean()) throw ParseError(at + ".reflect: expected true or false");
        pd.reflect = it->get<bool>();
      }
      if (const auto it = e.find("translate"); it != e.end()) pd.translate = point_at(*it, at + ".translate");
      rule.children.push_back(std::move(pd));
    }
    draft.rules.push_back(std::move(rule));
  }
  return draft;
}

ParsedSystem parse_system(std::string_view text) {
  SubstitutionSystem sys = assemble_system(parse_draft(text));
  ValidationReport report = validate(sys);
  return {std::move(sys), std::move(report)};
}

ParsedSystem load_system_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

std::string serialize_system(const SubstitutionSystem& sys) {
  Json doc;
  doc["name"] = sys.name();
  doc["lambda"] = fmt17(sys.lambda());
  Json protos = Json::array();
  for (const auto& p : sys.prototiles()) {
    Json verts = Json::array();
    for (const auto& v : p.shape.vertices()) verts.push_back(pair_json(v));
    protos.push_back(Json{{"label", p.label}, {"vertices", verts}, {"puncture", pair_json(p.puncture)}});
  }
  doc["prototiles"] = protos;
  Json rules = Json::object();
  for (std::size_t j = 0; j < sys.size(); ++j) {
    Json list = Json::array();
    for (const auto& c : sys.rule(j)) {
      list.push_back(Json{{"child", sys.prototile(c.child).label},
                          {"angle", fmt17(c.placement.angle())},
                          {"reflect", c.placement.orientation_reversing()},
                          {"translate", pair_json(c.placement.translation())}});
    }
    rules[sys.prototile(j).label] = list;
  }
  doc["rules"] = rules;
  return doc.dump(2) + "\n";
}

bool structurally_equal(const SubstitutionSystem& a, const SubstitutionSystem& b, double tol) {
  const auto close = [tol](double x, double y) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(x)); };
  const auto close_pt = [&](Point p, Point q) { return close(p.x, q.x) && close(p.y, q.y); };
  if (a.size() != b.size() || !close(a.lambda(), b.lambda())) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& p = a.prototile(i);
    const auto& q = b.prototile(i);
    if (p.label != q.label || p.shape.size() != q.shape.size() || !close_pt(p.puncture, q.puncture)) return false;
    for (std::size_t v = 0; v < p.shape.size(); ++v) {
      if (!close_pt(p.shape[v], q.shape[v])) return false;
    }
    const auto& ra = a.rule(i);
    const auto& rb = b.rule(i);
    if (ra.size() != rb.size()) return false;
    for (std::size_t c = 0; c < ra.size(); ++c) {
      const Mat2& la = ra[c].placement.linear();
      const Mat2& lb = rb[c].placement.linear();
      if (ra[c].child != rb[c].child || !close(la.a, lb.a) || !close(la.b, lb.b) || !close(la.c, lb.c) ||
          !close(la.d, lb.d) || !close_pt(ra[c].placement.translation(), rb[c].placement.translation())) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace tilemeasure
