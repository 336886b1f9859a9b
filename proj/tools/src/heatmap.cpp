#include "copent_cli/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace copent::cli {

namespace {

using Rgb = std::array<int, 3>;

Rgb parse_hex(const char* hex) {
  unsigned r = 0, g = 0, b = 0;
  std::sscanf(hex, "#%02x%02x%02x", &r, &g, &b);
  return {static_cast<int>(r), static_cast<int>(g), static_cast<int>(b)};
}

std::string to_hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string interpolate(double t) {
  static const Rgb lo = parse_hex(kLowColor);
  static const Rgb hi = parse_hex(kHighColor);
  Rgb out;
  for (int i = 0; i < 3; ++i) out[i] = static_cast<int>(std::lround(lo[i] + t * (hi[i] - lo[i])));
  return to_hex(out);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string render_heatmap_svg(const AssociationMatrix& m, const HeatmapOptions& options) {
  const std::size_t n = m.size();
  auto shown = [&](std::size_t i, std::size_t j) {
    const double v = m.at(i, j);
    return options.clamp_nonneg ? std::max(v, 0.0) : v;
  };

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || is_sentinel(m.at(i, j))) continue;
      lo = std::min(lo, shown(i, j));
      hi = std::max(hi, shown(i, j));
    }
  if (lo > hi) lo = hi = 0.0;
  const double range = hi - lo;

  std::size_t longest = 1;
  for (const auto& name : m.names) longest = std::max(longest, name.size());
  const int margin = 10 + 6 * static_cast<int>(longest);
  const int grid = kCellPx * static_cast<int>(n);
  const int legend_x = margin + grid + 16;
  const int legend_h = std::max(grid, 60);
  const int width = legend_x + 12 + 8 + 60;
  const int height = margin + legend_h + 10;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<title>" << xml_escape(std::string(to_string(m.measure))) << " association matrix</title>\n"
      << "<defs><linearGradient id=\"scale\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
      << "<stop offset=\"0\" stop-color=\"" << kLowColor << "\"/>"
      << "<stop offset=\"1\" stop-color=\"" << kHighColor << "\"/>"
      << "</linearGradient></defs>\n";

  svg << "<g class=\"cells\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::string color;
      if (i == j) {
        color = options.mask_diagonal ? kMaskColor : kHighColor;
      } else if (is_sentinel(m.at(i, j))) {
        color = kMaskColor;
      } else {
        color = interpolate(range > 0.0 ? (shown(i, j) - lo) / range : 0.0);
      }
      svg << "<rect class=\"cell\" x=\"" << margin + kCellPx * static_cast<int>(j) << "\" y=\""
          << margin + kCellPx * static_cast<int>(i) << "\" width=\"" << kCellPx << "\" height=\"" << kCellPx
          << "\" fill=\"" << color << "\"/>\n";
    }
  }
  svg << "</g>\n<g class=\"labels\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    const int c = margin + kCellPx * static_cast<int>(i) + kCellPx / 2;
    const std::string name = xml_escape(m.names[i]);
    svg << "<text x=\"" << margin - 4 << "\" y=\"" << c + 3 << "\" text-anchor=\"end\">" << name << "</text>\n";
    svg << "<text transform=\"translate(" << c + 3 << ',' << margin - 4 << ") rotate(-90)\">" << name
        << "</text>\n";
  }
  svg << "</g>\n<g class=\"legend\">\n"
      << "<path d=\"M" << legend_x << ' ' << margin << "h12v" << legend_h << "h-12z\" fill=\"url(#scale)\" "
      << "stroke=\"#000000\" stroke-width=\"0.5\"/>\n"
      << "<text x=\"" << legend_x + 16 << "\" y=\"" << margin + 8 << "\">" << fmt(hi) << "</text>\n"
      << "<text x=\"" << legend_x + 16 << "\" y=\"" << margin + legend_h << "\">" << fmt(lo) << "</text>\n"
      << "</g>\n</svg>\n";
  return svg.str();
}

}  // namespace copent::cli
