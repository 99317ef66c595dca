#pragma once

#include <Eigen/Core>

namespace spatopt::geom {

using Point = Eigen::Vector2d;

/// Sign of the orientation determinant of (a, b, c): +1 counterclockwise,
/// -1 clockwise, 0 collinear. Exact for all finite double inputs.
int orient2d(const Point& a, const Point& b, const Point& c);

/// Sign of the in-circle determinant: +1 if d lies strictly inside the circle
/// through a, b, c (given counterclockwise), -1 outside, 0 co-circular. Exact.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

/// In-circle sign under symbolic perturbation of the lifted coordinate
/// x^2 + y^2 + eps_k, with eps decreasing in vertex id. Never returns 0 when
/// a, b, c are not collinear. Consistent across all quadruples of a point set,
/// so the resulting Delaunay triangulation is unique.
int incircle_perturbed(const Point& a, const Point& b, const Point& c, const Point& d, int ia, int ib, int ic,
                       int id);

}  // namespace spatopt::geom
