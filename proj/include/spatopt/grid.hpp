#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace spatopt {

enum class ElementType : std::uint8_t { Material = 0, Chamber1 = 1, Chamber2 = 2, Chamber3 = 3 };

inline constexpr std::array<ElementType, 4> kElementTypes = {
    ElementType::Material, ElementType::Chamber1, ElementType::Chamber2, ElementType::Chamber3};

constexpr bool is_chamber(ElementType t) { return t != ElementType::Material; }

/// Pressure-supply index 0..2 of a chamber type.
constexpr int chamber_index(ElementType t) { return static_cast<int>(t) - 1; }

constexpr ElementType chamber_type(int supply) { return static_cast<ElementType>(supply + 1); }

std::string_view to_string(ElementType t);
ElementType element_type_from_string(std::string_view s);

/// Annular-sector grid layout. Angles in degrees, radii in mm.
struct GridSpec {
  double r_s = 10.0;
  double r_e = 25.0;
  double phi_s = 0.0;
  double phi_e = 360.0;
  int n_r = 128;
  int n_phi = 360;

  void validate() const;
  bool full_ring() const { return phi_e - phi_s == 360.0; }
  bool operator==(const GridSpec&) const = default;
};

/// Equal-area polar grid: ring boundaries r_k = sqrt(r_s^2 + k/N_r (r_e^2 - r_s^2)),
/// uniform angular columns. Element (i, j) is ring i, column j, stored row-major.
class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int n_r() const { return spec_.n_r; }
  int n_phi() const { return spec_.n_phi; }
  std::size_t size() const { return static_cast<std::size_t>(spec_.n_r) * spec_.n_phi; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * spec_.n_phi + j; }

  /// Ring boundary radius, k = 0..n_r.
  double radius(int k) const { return radii_[k]; }
  double element_area() const { return element_area_; }
  /// Area of element (i, j) computed from its bounding radii and angles.
  double element_area_from_bounds(int i, int j) const;

  double angle_step() const { return angle_step_; }  // rad
  double column_start(int j) const;                   // rad
  double centroid_angle(int j) const { return centroid_angle_[j]; }  // rad
  /// Distance of the exact annular-sector centroid from the ring center.
  double centroid_radius(int i) const { return centroid_radius_[i]; }
  Eigen::Vector2d centroid(int i, int j) const;

  /// Column offset used by the distance kernel: (j - k) mod n_phi on a full
  /// ring, |j - k| otherwise. Depends only on the index difference.
  int column_offset(int j, int k) const {
    int d = j - k;
    if (full_ring_) return d < 0 ? d + spec_.n_phi : d;
    return d < 0 ? -d : d;
  }
  /// cos(offset * angle_step) for offset in [0, n_phi).
  double offset_cos(int offset) const { return offset_cos_[offset]; }

  /// Squared Cartesian distance between the centroids of two elements, by the
  /// law of cosines on (ring radius, column offset).
  double centroid_distance2(int i, int j, int k_r, int k_phi) const {
    const double a = centroid_radius_[i];
    const double b = centroid_radius_[k_r];
    return a * a + b * b - 2.0 * a * b * offset_cos_[column_offset(j, k_phi)];
  }

  /// Wrap a column index on a full ring; -1 if out of range on a partial ring.
  int wrap_column(int j) const;

  /// Exact second moments of element (i, j) about the ring center:
  /// {int x^2 dA, int y^2 dA, int x y dA}.
  std::array<double, 3> element_second_moments(int i, int j) const;

 private:
  GridSpec spec_;
  bool full_ring_;
  double element_area_;
  double angle_step_;
  std::vector<double> radii_;
  std::vector<double> centroid_radius_;
  std::vector<double> centroid_angle_;
  std::vector<double> offset_cos_;
};

}  // namespace spatopt
