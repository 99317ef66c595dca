#include "spatopt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace spatopt::svg {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

// Arcs are split so that no segment exceeds 90 degrees.
void arc_to(std::string& d, double r, double a0, double a1, bool ccw) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(a1 - a0) / (std::numbers::pi / 2))));
  for (int k = 1; k <= pieces; ++k) {
    const double a = a0 + (a1 - a0) * k / pieces;
    // SVG y points down; the sweep flag is mirrored accordingly.
    d += " A " + num(r) + " " + num(r) + " 0 0 " + (ccw ? "0 " : "1 ") + num(r * std::cos(a)) + " " +
         num(-r * std::sin(a));
  }
}

std::string sector_path(double r0, double r1, double a0, double a1) {
  std::string d = "M " + num(r1 * std::cos(a0)) + " " + num(-r1 * std::sin(a0));
  arc_to(d, r1, a0, a1, true);
  d += " L " + num(r0 * std::cos(a1)) + " " + num(-r0 * std::sin(a1));
  arc_to(d, r0, a1, a0, false);
  d += " Z";
  return d;
}

struct Bounds {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  void add(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
  }
};

void panel(std::string& out, const char* title, double ox, int ax, int ay, const Workspace& computed,
           const Workspace* target) {
  constexpr double size = 400.0, pad = 30.0;
  Bounds b;
  for (const auto& p : computed.points) b.add(p[ax], p[ay]);
  if (target)
    for (const auto& p : target->points) b.add(p[ax], p[ay]);
  if (!std::isfinite(b.lo_x)) b = Bounds{-1, 1, -1, 1};
  const double span = std::max({b.hi_x - b.lo_x, b.hi_y - b.lo_y, 1e-6});
  const double cx = 0.5 * (b.lo_x + b.hi_x), cy = 0.5 * (b.lo_y + b.hi_y);
  const double scale = (size - 2 * pad) / span;
  auto px = [&](double x) { return ox + size / 2 + (x - cx) * scale; };
  auto py = [&](double y) { return size / 2 - (y - cy) * scale; };

  out += "<g>\n<rect x=\"" + num(ox) + "\" y=\"0\" width=\"" + num(size) + "\" height=\"" + num(size) +
         "\" fill=\"white\" stroke=\"#cccccc\"/>\n";
  out += "<text x=\"" + num(ox + 8) + "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" + title +
         "</text>\n";
  auto markers = [&](const Workspace& w, const char* cls, std::string_view fill) {
    for (const auto& p : w.points) {
      if (!std::isfinite(p[ax]) || !std::isfinite(p[ay])) continue;
      out += "<circle class=\"" + std::string(cls) + "\" cx=\"" + num(px(p[ax])) + "\" cy=\"" + num(py(p[ay])) +
             "\" r=\"4\" fill=\"" + std::string(fill) + "\"/>\n";
    }
  };
  if (target) markers(*target, "target", kTargetColor);
  markers(computed, "computed", kComputedColor);
  out += "</g>\n";
}

}  // namespace

std::string_view color(ElementType t) {
  switch (t) {
    case ElementType::Material: return "#9e9e9e";
    case ElementType::Chamber1: return "#d62728";
    case ElementType::Chamber2: return "#f2c200";
    case ElementType::Chamber3: return "#1f5fbf";
  }
  return "#000000";
}

std::string render_raster(const CrossSectionRaster& raster) {
  const Grid grid(raster.grid());
  const double r_e = grid.spec().r_e;
  const double half = r_e * 1.05;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(-half) + " " + num(-half) + " " +
                    num(2 * half) + " " + num(2 * half) + "\" width=\"600\" height=\"600\">\n";
  for (int i = 0; i < grid.n_r(); ++i) {
    const double r0 = grid.radius(i), r1 = grid.radius(i + 1);
    int j = 0;
    while (j < grid.n_phi()) {
      const ElementType t = raster.at(i, j);
      int end = j + 1;
      while (end < grid.n_phi() && raster.at(i, end) == t) ++end;
      out += "<path class=\"" + std::string(to_string(t)) + "\" fill=\"" + std::string(color(t)) + "\" d=\"" +
             sector_path(r0, r1, grid.column_start(j), grid.column_start(end)) + "\"/>\n";
      j = end;
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_workspace(const Workspace& computed, const Workspace* target) {
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 820 400\" width=\"820\" height=\"400\">\n";
  panel(out, "top (x-y)", 0.0, 0, 1, computed, target);
  panel(out, "side (x-z)", 420.0, 0, 2, computed, target);
  out += "</svg>\n";
  return out;
}

}  // namespace spatopt::svg
