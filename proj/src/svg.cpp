#include "rydlgt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydlgt/error.hpp"
#include "rydlgt/io.hpp"

namespace rydlgt::svg {

namespace {

using io::format_double;

std::string num(double v) { return format_double(std::round(v * 100.0) / 100.0); }

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

// Viridis-like ramp through five anchors.
std::string colour(double t) {
  static const double anchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double w = t - k;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(anchors[k][c] * (1 - w) + anchors[k + 1][c] * w));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string lattice(const Geometry& geom, const LatticeOverlay& overlay) {
  const double scale = 40.0;
  const double pad = 30.0;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& v : geom.vertices()) {
    const Vec2 p = Geometry::site_position(v);
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const auto px = [&](Vec2 p) { return std::pair{pad + (p.x - xmin) * scale, pad + (ymax - p.y) * scale}; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(2 * pad + (xmax - xmin) * scale)
      << "\" height=\"" << num(2 * pad + (ymax - ymin) * scale) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::vector<double> sz(geom.lattice().size(), -0.5);
  std::vector<char> present(geom.lattice().size(), 0);
  std::vector<char> excited(geom.lattice().size(), 0);
  for (std::size_t k = 0; k < geom.size(); ++k) {
    const int id = geom.atoms()[k].id;
    present[id] = 1;
    if (overlay.gauge) sz[id] = overlay.gauge->sz[k];
    if (overlay.occupation) excited[id] = bit(*overlay.occupation, static_cast<int>(k)) ? 1 : 0;
  }
  for (const auto& link : geom.lattice()) {
    const auto [x1, y1] = px(Geometry::site_position(link.from));
    const auto [x2, y2] = px(Geometry::site_position(link.to));
    const bool string = overlay.gauge && present[link.id] && sz[link.id] > 0.0;
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
        << "\" stroke=\"" << (string ? "#1f77b4" : "#bbbbbb") << "\" stroke-width=\"" << (string ? 6 : 1.5)
        << "\"/>\n";
  }
  for (const auto& link : geom.lattice()) {
    const auto [x, y] = px(link.position);
    if (!present[link.id]) {
      out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y)
          << "\" r=\"7\" fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"3,2\"/>\n";
      continue;
    }
    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"7\" fill=\""
        << (excited[link.id] ? "#222222" : "white") << "\" stroke=\"#222222\"/>\n";
  }
  for (std::size_t v = 0; v < geom.vertices().size(); ++v) {
    const Site& site = geom.vertices()[v];
    const auto [x, y] = px(Geometry::site_position(site));
    int q = 0;
    if (const auto s = geom.defect_charge(site)) q = *s;
    const bool dynamical = overlay.gauge && overlay.gauge->charge[v] != 0;
    if (dynamical) q = overlay.gauge->charge[v];
    if (q == 0) continue;
    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"" << (dynamical ? 6 : 10) << "\" fill=\""
        << (q > 0 ? "#1f77b4" : "#d62728") << "\" fill-opacity=\"" << (dynamical ? "0.6" : "1") << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap(const ScanResult& scan, const std::string& label, const std::string& title) {
  const double cell = 28.0;
  const double left = 70.0, top = 40.0, bottom = 50.0, right = 30.0;
  const auto nx = static_cast<double>(scan.x.size());
  const auto ny = static_cast<double>(scan.y.size());
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(left + right + nx * cell) << "\" height=\""
      << num(top + bottom + ny * cell) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(left) << "\" y=\"20\" font-size=\"14\">" << escape(title) << "</text>\n";
  for (std::size_t ix = 0; ix < scan.x.size(); ++ix) {
    for (std::size_t iy = 0; iy < scan.y.size(); ++iy) {
      const double p = probability_of(scan.at(ix, iy).rows, label);
      const double x = left + static_cast<double>(ix) * cell;
      const double y = top + (ny - 1 - static_cast<double>(iy)) * cell;
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell) << "\" height=\""
          << num(cell) << "\" fill=\"" << colour(p) << "\"><title>" << format_double(p) << "</title></rect>\n";
    }
    out << "<text x=\"" << num(left + (static_cast<double>(ix) + 0.5) * cell) << "\" y=\""
        << num(top + ny * cell + 14) << "\" text-anchor=\"middle\">" << format_double(scan.x[ix]) << "</text>\n";
  }
  for (std::size_t iy = 0; iy < scan.y.size(); ++iy) {
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(top + (ny - 0.5 - static_cast<double>(iy)) * cell + 4)
        << "\" text-anchor=\"end\">" << format_double(scan.y[iy]) << "</text>\n";
  }
  out << "<text x=\"" << num(left + nx * cell / 2) << "\" y=\"" << num(top + ny * cell + 36)
      << "\" text-anchor=\"middle\">" << escape(scan.x_name) << "</text>\n";
  out << "<text x=\"14\" y=\"" << num(top + ny * cell / 2) << "\" transform=\"rotate(-90 14 "
      << num(top + ny * cell / 2) << ")\" text-anchor=\"middle\">" << escape(scan.y_name) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string line_plot(const std::vector<double>& x, const std::vector<Series>& series, const std::string& x_label,
                      const std::string& title, const std::vector<std::pair<double, std::string>>& markers) {
  for (const auto& s : series) {
    if (s.y.size() != x.size()) {
      throw ConfigError("series '" + s.name + "' has " + std::to_string(s.y.size()) + " points for " +
                        std::to_string(x.size()) + " abscissae");
    }
  }
  const double w = 480.0, h = 300.0, left = 55.0, top = 35.0, right = 120.0, bottom = 45.0;
  double xmin = x.empty() ? 0.0 : x.front(), xmax = x.empty() ? 1.0 : x.back();
  if (xmax <= xmin) xmax = xmin + 1.0;
  double ymax = 1e-12;
  for (const auto& s : series) {
    for (double v : s.y) ymax = std::max(ymax, v);
  }
  ymax = std::min(1.0, std::ceil(ymax * 10.0) / 10.0);
  if (ymax <= 0.0) ymax = 1.0;
  const auto sx = [&](double v) { return left + (v - xmin) / (xmax - xmin) * w; };
  const auto sy = [&](double v) { return top + (1.0 - v / ymax) * h; };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(left + w + right) << "\" height=\""
      << num(top + h + bottom) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(left) << "\" y=\"20\" font-size=\"14\">" << escape(title) << "</text>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ymax * k / 4.0;
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(v) + 4) << "\" text-anchor=\"end\">"
        << format_double(std::round(v * 1000) / 1000) << "</text>\n";
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(top + h + 16) << "\" text-anchor=\"middle\">"
        << format_double(std::round(xv * 1000) / 1000) << "</text>\n";
  }
  out << "<text x=\"" << num(left + w / 2) << "\" y=\"" << num(top + h + 36) << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  for (const auto& [mx, name] : markers) {
    out << "<line x1=\"" << num(sx(mx)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(sx(mx)) << "\" y2=\""
        << num(top + h) << "\" stroke=\"#777777\" stroke-dasharray=\"4,3\"/>\n";
    out << "<text x=\"" << num(sx(mx) + 3) << "\" y=\"" << num(top + 12) << "\">" << escape(name) << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* c = kPalette[s % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < std::min(x.size(), series[s].y.size()); ++k) {
      out << num(sx(x[k])) << ',' << num(sy(series[s].y[k])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << num(left + w + 10) << "\" y=\"" << num(top + 14 + 16 * static_cast<double>(s))
        << "\" fill=\"" << c << "\">" << escape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace rydlgt::svg
