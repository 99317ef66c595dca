#include "spatopt/grid.hpp"

#include "spatopt/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace spatopt {

std::string_view to_string(ElementType t) {
  switch (t) {
    case ElementType::Material: return "material";
    case ElementType::Chamber1: return "chamber1";
    case ElementType::Chamber2: return "chamber2";
    case ElementType::Chamber3: return "chamber3";
  }
  return "material";
}

ElementType element_type_from_string(std::string_view s) {
  for (ElementType t : kElementTypes)
    if (to_string(t) == s) return t;
  throw ValidationError("unknown element type '" + std::string(s) + "'");
}

void GridSpec::validate() const {
  if (!(r_s > 0.0) || !(r_e > r_s) || !std::isfinite(r_e))
    throw ValidationError("grid radii must satisfy 0 < r_s < r_e");
  if (!(phi_e > phi_s) || phi_e - phi_s > 360.0)
    throw ValidationError("grid angles must satisfy phi_s < phi_e <= phi_s + 360");
  if (n_r < 1 || n_phi < 1) throw ValidationError("grid element counts must be positive");
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  full_ring_ = spec_.full_ring();
  const double span = (spec_.phi_e - spec_.phi_s) * std::numbers::pi / 180.0;
  angle_step_ = span / spec_.n_phi;
  const double ring_area2 = spec_.r_e * spec_.r_e - spec_.r_s * spec_.r_s;
  element_area_ = 0.5 * span * ring_area2 / (static_cast<double>(spec_.n_r) * spec_.n_phi);

  radii_.resize(spec_.n_r + 1);
  for (int k = 0; k <= spec_.n_r; ++k)
    radii_[k] = std::sqrt(spec_.r_s * spec_.r_s + ring_area2 * k / spec_.n_r);
  radii_.front() = spec_.r_s;
  radii_.back() = spec_.r_e;
  for (int k = 0; k < spec_.n_r; ++k)
    if (!(radii_[k + 1] > radii_[k])) throw ValidationError("grid ring radii are not strictly increasing");

  // Centroid of an annular sector: (2/3)(r2^3 - r1^3)/(r2^2 - r1^2) * sin(a/2)/(a/2).
  const double half = 0.5 * angle_step_;
  const double sinc = std::sin(half) / half;
  centroid_radius_.resize(spec_.n_r);
  for (int i = 0; i < spec_.n_r; ++i) {
    const double r1 = radii_[i], r2 = radii_[i + 1];
    const double r1s = r1 * r1, r2s = r2 * r2;
    centroid_radius_[i] = (2.0 / 3.0) * (r2s * r2 - r1s * r1) / (r2s - r1s) * sinc;
  }
  centroid_angle_.resize(spec_.n_phi);
  for (int j = 0; j < spec_.n_phi; ++j) centroid_angle_[j] = column_start(j) + half;
  offset_cos_.resize(spec_.n_phi);
  for (int m = 0; m < spec_.n_phi; ++m) offset_cos_[m] = std::cos(m * angle_step_);
  // Offsets m and n_phi - m are mirror images on a full ring; equal entries keep mirrored ties exact.
  if (full_ring_)
    for (int m = spec_.n_phi / 2 + 1; m < spec_.n_phi; ++m) offset_cos_[m] = offset_cos_[spec_.n_phi - m];
}

double Grid::column_start(int j) const { return spec_.phi_s * std::numbers::pi / 180.0 + j * angle_step_; }

double Grid::element_area_from_bounds(int i, int /*j*/) const {
  return 0.5 * angle_step_ * (radii_[i + 1] * radii_[i + 1] - radii_[i] * radii_[i]);
}

Eigen::Vector2d Grid::centroid(int i, int j) const {
  const double rho = centroid_radius_[i];
  return {rho * std::cos(centroid_angle_[j]), rho * std::sin(centroid_angle_[j])};
}

int Grid::wrap_column(int j) const {
  if (full_ring_) {
    j %= spec_.n_phi;
    return j < 0 ? j + spec_.n_phi : j;
  }
  return (j < 0 || j >= spec_.n_phi) ? -1 : j;
}

std::array<double, 3> Grid::element_second_moments(int i, int j) const {
  const double r1 = radii_[i], r2 = radii_[i + 1];
  const double radial = 0.25 * (r2 * r2 * r2 * r2 - r1 * r1 * r1 * r1);
  const double a = column_start(j);
  const double b = a + angle_step_;
  const double linear = 0.5 * (b - a);
  const double s2 = 0.25 * (std::sin(2.0 * b) - std::sin(2.0 * a));
  const double sa = std::sin(a), sb = std::sin(b);
  return {radial * (linear + s2), radial * (linear - s2), radial * 0.5 * (sb * sb - sa * sa)};
}

}  // namespace spatopt
