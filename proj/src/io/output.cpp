#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "tilemeasure/io.hpp"

namespace tilemeasure {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

constexpr const char* kFills[] = {"#f4a261", "#2a9d8f", "#e9c46a", "#8ab17d",
                                  "#e76f51", "#457b9d", "#b5838d", "#6d6875"};
constexpr const char* kDots[] = {"#1d3557", "#9d0208", "#3a0ca3"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(const DiscreteMeasure& mu, std::ostream& out) {
  out << "kind,k,x,y,weight_num,weight_den,weight_real\n";
  const std::string kind(to_string(mu.kind()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point p = mu.position(i);
    const Fraction w = mu.weight(i);
    out << kind << ',' << mu.level() << ',' << g17(p.x) << ',' << g17(p.y) << ',' << w.num << ',' << w.den << ','
        << g17(w.value()) << '\n';
  }
}

void export_csv(const DiscreteMeasure& mu, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_csv(mu, out);
  finish(out, path);
}

void write_convergence_csv(const SubstitutionSystem& sys, const ConvergenceReport& report, std::ostream& out) {
  out << "k,target,kind,num,den,value,lebesgue,gap\n";
  for (const auto& r : report.rows) {
    const auto& t = report.targets[r.target];
    const std::string name = format_address(sys, t.tile.address);
    const auto row = [&](const char* kind, const Fraction& f, double gap) {
      out << r.k << ',' << name << ',' << kind << ',' << f.num << ',' << f.den << ',' << g17(f.value()) << ','
          << g17(t.lebesgue) << ',' << g17(gap) << '\n';
    };
    row("xi", r.xi, r.gap_xi);
    row("rho", r.rho, r.gap_rho);
    row("sigma", r.sigma, r.gap_sigma);
  }
  for (const auto& e : report.edge_rows) {
    const auto& ref = report.edges[e.edge];
    out << e.k << ',' << format_address(sys, ref.tile) << ':' << ref.edge_index << ",rho," << e.rho.num << ','
        << e.rho.den << ',' << g17(e.rho.value()) << ",,\n";
  }
}

void write_svg(const SubstitutionSystem& sys, const PatchLevel& level, std::span<const DiscreteMeasure> measures,
               std::ostream& out) {
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const auto& p : sys.prototiles()) {
    const Box& b = p.shape.bounds();
    min_x = std::min(min_x, b.min_x);
    min_y = std::min(min_y, b.min_y);
    max_x = std::max(max_x, b.max_x);
    max_y = std::max(max_y, b.max_y);
  }
  const double w = max_x - min_x, h = max_y - min_y;
  const double margin = 0.05 * std::max(w, h);
  const double stroke = 0.002 * std::max(w, h);

  // y is flipped so the picture has the usual orientation.
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << g9(min_x - margin) << ' ' << g9(-max_y - margin)
      << ' ' << g9(w + 2 * margin) << ' ' << g9(h + 2 * margin) << "\">\n"
      << "<title>" << xml_escape(sys.name()) << " level " << level.k << "</title>\n"
      << "<g stroke=\"#222\" stroke-width=\"" << g9(stroke) << "\" stroke-linejoin=\"round\">\n";
  for (const auto& tile : level.tiles) {
    const Polygon g = tile.geometry(sys);
    out << "<polygon data-label=\"" << xml_escape(sys.prototile(tile.type).label) << "\" fill=\""
        << kFills[tile.type % std::size(kFills)] << "\" points=\"";
    for (std::size_t i = 0; i < g.size(); ++i) {
      out << (i ? " " : "") << g9(g[i].x) << ',' << g9(-g[i].y);
    }
    out << "\"/>\n";
  }
  out << "</g>\n";

  const double base = 0.04 * std::max(w, h);
  for (std::size_t m = 0; m < measures.size(); ++m) {
    const auto& mu = measures[m];
    double heaviest = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) heaviest = std::max(heaviest, mu.weight(i).value());
    const double unit = heaviest > 0.0 ? base / std::sqrt(heaviest) / std::sqrt(static_cast<double>(mu.size())) : 0.0;
    out << "<g data-measure=\"" << to_string(mu.kind()) << "\" fill=\"" << kDots[m % std::size(kDots)]
        << "\" fill-opacity=\"0.8\">\n";
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const Point p = mu.position(i);
      out << "<circle cx=\"" << g9(p.x) << "\" cy=\"" << g9(-p.y) << "\" r=\""
          << g9(unit * std::sqrt(mu.weight(i).value())) << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
}

void render_svg(const SubstitutionSystem& sys, const PatchLevel& level, std::span<const DiscreteMeasure> measures,
                const std::filesystem::path& path) {
  auto out = open_out(path);
  write_svg(sys, level, measures, out);
  finish(out, path);
}

}  // namespace tilemeasure
