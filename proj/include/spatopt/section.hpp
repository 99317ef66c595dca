#pragma once

#include "spatopt/raster.hpp"

#include <Eigen/Core>

#include <array>

namespace spatopt {

/// Geometric input of the rod model. Areas in mm^2, lengths in mm, moments in mm^4.
///
/// The principal frame has its origin at the material centroid and its first
/// axis rotated by theta_p from the grid x-axis. I_1 is the second moment
/// about the first principal axis (integral of y'^2), I_2 about the second.
struct SectionProperties {
  double material_area = 0.0;
  std::array<double, 3> chamber_area{};
  /// Pressure centroid of each supply relative to the material centroid, in the principal frame (z = 0).
  std::array<Eigen::Vector3d, 3> chamber_offset{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero(),
                                                  Eigen::Vector3d::Zero()};
  /// Material centroid in the grid frame.
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  /// Chamber centroids in the grid frame (zero for empty supplies).
  std::array<Eigen::Vector2d, 3> chamber_centroid{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero(),
                                                   Eigen::Vector2d::Zero()};
  double theta_p = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
  /// Centroidal material moments in the grid frame: {int x^2, int y^2, int x y}.
  std::array<double, 3> centroidal_moments{};
};

/// Chamber areas, pressure centroids and principal moments of a raster.
/// Throws DegenerateSectionError when the raster has no material.
SectionProperties section_properties(const CrossSectionRaster& raster);
SectionProperties section_properties(const CrossSectionRaster& raster, const Grid& grid);

/// Principal decomposition of centroidal moments {Sxx, Syy, Sxy}: returns
/// {theta_p, I_1, I_2} with I_1 >= I_2, theta_p in (-pi/2, pi/2], and
/// theta_p = 0 for a degenerate (isotropic) tensor.
std::array<double, 3> principal_moments(double sxx, double syy, double sxy);

}  // namespace spatopt
