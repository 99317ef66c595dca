#include "spatopt/section.hpp"

#include "spatopt/error.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace spatopt {

std::array<double, 3> principal_moments(double sxx, double syy, double sxy) {
  const double mean = 0.5 * (sxx + syy);
  const double half_diff = 0.5 * (sxx - syy);
  const double radius = std::hypot(half_diff, sxy);
  const double big = mean + radius;
  const double small = mean - radius;
  if (radius <= 1e-10 * std::abs(mean)) return {0.0, big, small};

  // Direction of largest spread of x'^2 is the second principal axis, since
  // I_1 = int y'^2 must be the larger moment. The first axis is perpendicular.
  const double spread_axis = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  double theta = spread_axis + 0.5 * std::numbers::pi;
  while (theta > 0.5 * std::numbers::pi) theta -= std::numbers::pi;
  while (theta <= -0.5 * std::numbers::pi) theta += std::numbers::pi;
  return {theta, big, small};
}

SectionProperties section_properties(const CrossSectionRaster& raster) {
  return section_properties(raster, Grid(raster.grid()));
}

SectionProperties section_properties(const CrossSectionRaster& raster, const Grid& grid) {
  const int n_r = raster.n_r();
  const int n_phi = raster.n_phi();
  const double da = grid.element_area();

  // Per-column angular factors and per-ring radial factors; element moments are their products.
  std::vector<double> col_cos(n_phi), col_sin(n_phi), col_xx(n_phi), col_yy(n_phi), col_xy(n_phi);
  for (int j = 0; j < n_phi; ++j) {
    col_cos[j] = std::cos(grid.centroid_angle(j));
    col_sin[j] = std::sin(grid.centroid_angle(j));
    const double a = grid.column_start(j);
    const double b = a + grid.angle_step();
    const double linear = 0.5 * (b - a);
    const double s2 = 0.25 * (std::sin(2.0 * b) - std::sin(2.0 * a));
    const double sa = std::sin(a), sb = std::sin(b);
    col_xx[j] = linear + s2;
    col_yy[j] = linear - s2;
    col_xy[j] = 0.5 * (sb * sb - sa * sa);
  }

  std::array<std::size_t, 4> count{};
  std::array<Eigen::Vector2d, 4> first{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                                       Eigen::Vector2d::Zero()};
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n_r; ++i) {
    std::array<double, 4> ring_cos{}, ring_sin{};
    double ring_xx = 0.0, ring_yy = 0.0, ring_xy = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const int t = static_cast<int>(raster.at(i, j));
      ++count[t];
      ring_cos[t] += col_cos[j];
      ring_sin[t] += col_sin[j];
      if (t == 0) {
        ring_xx += col_xx[j];
        ring_yy += col_yy[j];
        ring_xy += col_xy[j];
      }
    }
    const double rho = grid.centroid_radius(i);
    for (int t = 0; t < 4; ++t) first[t] += rho * Eigen::Vector2d(ring_cos[t], ring_sin[t]);
    const double r1 = grid.radius(i), r2 = grid.radius(i + 1);
    const double radial = 0.25 * (r2 * r2 * r2 * r2 - r1 * r1 * r1 * r1);
    sxx += radial * ring_xx;
    syy += radial * ring_yy;
    sxy += radial * ring_xy;
  }
  if (count[0] == 0) throw DegenerateSectionError("cross-section contains no material elements");

  SectionProperties sp;
  sp.material_area = static_cast<double>(count[0]) * da;
  sp.centroid = first[0] / static_cast<double>(count[0]);

  // Steiner transfer from the ring center to the material centroid.
  const double a = sp.material_area;
  sxx -= a * sp.centroid.x() * sp.centroid.x();
  syy -= a * sp.centroid.y() * sp.centroid.y();
  sxy -= a * sp.centroid.x() * sp.centroid.y();
  sp.centroidal_moments = {sxx, syy, sxy};

  const auto pm = principal_moments(sxx, syy, sxy);
  sp.theta_p = pm[0];
  sp.i1 = pm[1];
  sp.i2 = std::max(pm[2], 0.0);

  const double c = std::cos(sp.theta_p), s = std::sin(sp.theta_p);
  for (int k = 0; k < 3; ++k) {
    const std::size_t n = count[k + 1];
    sp.chamber_area[k] = static_cast<double>(n) * da;
    if (n == 0) continue;
    sp.chamber_centroid[k] = first[k + 1] / static_cast<double>(n);
    const Eigen::Vector2d d = sp.chamber_centroid[k] - sp.centroid;
    sp.chamber_offset[k] = Eigen::Vector3d(c * d.x() + s * d.y(), -s * d.x() + c * d.y(), 0.0);
  }
  return sp;
}

}  // namespace spatopt
