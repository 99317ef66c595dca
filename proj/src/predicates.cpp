#include "spatopt/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace spatopt::geom {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using boost::multiprecision::cpp_int;

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;  // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

// Exact value of a finite double as a rational.
Rational exact(double x) {
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  const auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  cpp_int num(m);
  if (exp >= 0) return Rational(num << exp);
  return Rational(num, cpp_int(1) << -exp);
}

int sign(const Rational& r) { return r.sign(); }

int orient_exact(const Point& a, const Point& b, const Point& c) {
  const Rational ax = exact(a.x()), ay = exact(a.y());
  const Rational bx = exact(b.x()) - ax, by = exact(b.y()) - ay;
  const Rational cx = exact(c.x()) - ax, cy = exact(c.y()) - ay;
  return sign(bx * cy - by * cx);
}

int incircle_exact(const Point& a, const Point& b, const Point& c, const Point& d) {
  const Rational dx = exact(d.x()), dy = exact(d.y());
  const Rational adx = exact(a.x()) - dx, ady = exact(a.y()) - dy;
  const Rational bdx = exact(b.x()) - dx, bdy = exact(b.y()) - dy;
  const Rational cdx = exact(c.x()) - dx, cdy = exact(c.y()) - dy;
  const Rational alift = adx * adx + ady * ady;
  const Rational blift = bdx * bdx + bdy * bdy;
  const Rational clift = cdx * cdx + cdy * cdy;
  const Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
  return sign(det);
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  const double bound = kOrientBound * detsum;
  if (det >= bound) return 1;
  if (-det >= bound) return -1;
  return orient_exact(a, b, c);
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double alift = adx * adx + ady * ady;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double blift = bdx * bdx + bdy * bdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                           (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return incircle_exact(a, b, c, d);
}

int incircle_perturbed(const Point& a, const Point& b, const Point& c, const Point& d, int ia, int ib, int ic,
                       int id) {
  const int s = incircle(a, b, c, d);
  if (s != 0) return s;
  // Derivative of the determinant with respect to each vertex's lift.
  std::array<std::pair<int, int>, 4> terms = {{{ia, orient2d(b, c, d)},
                                               {ib, orient2d(c, a, d)},
                                               {ic, orient2d(a, b, d)},
                                               {id, -orient2d(a, b, c)}}};
  std::sort(terms.begin(), terms.end());
  for (const auto& [id_, coefficient] : terms)
    if (coefficient != 0) return coefficient;
  return 0;
}

}  // namespace spatopt::geom
