#ifndef ARITHDYN_SPHERE_HPP
#define ARITHDYN_SPHERE_HPP

// Points of P^1(C) and the Riemann sphere. The affine coordinate is
// z = x_1 / x_0, so (1 : z) is finite and (0 : 1) is infinity.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace arithdyn {

using Complex = std::complex<double>;

struct CPoint {
  Complex z{0.0, 0.0};
  bool at_infinity = false;

  static CPoint finite(Complex z) { return {z, false}; }
  static CPoint infinity() { return {Complex{}, true}; }

  /// The point (x_0 : x_1).
  static CPoint from_homogeneous(Complex x0, Complex x1) {
    if (x0 == Complex{}) return infinity();
    return finite(x1 / x0);
  }

  /// A homogeneous representative with max(|x_0|, |x_1|) = 1.
  std::array<Complex, 2> homogeneous() const {
    if (at_infinity) return {Complex{}, Complex{1.0}};
    if (std::abs(z) <= 1.0) return {Complex{1.0}, z};
    return {1.0 / z, Complex{1.0}};
  }
};

struct SpherePoint {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Stereographic image of the chart coordinate u: chart 0 is z = x_1/x_0,
/// chart 1 is w = x_0/x_1. Both land on the unit sphere with z = 0 at the
/// south pole and infinity at the north pole.
inline SpherePoint sphere_from_chart(int chart, Complex u) {
  const double r2 = std::norm(u);
  const double q = 1.0 + r2;
  SpherePoint p{2.0 * u.real() / q, 2.0 * u.imag() / q, (r2 - 1.0) / q};
  if (chart == 1) {
    p.y = -p.y;
    p.z = -p.z;
  }
  return p;
}

inline SpherePoint to_sphere(const CPoint& p) {
  if (p.at_infinity) return {0.0, 0.0, 1.0};
  if (std::abs(p.z) <= 1.0) return sphere_from_chart(0, p.z);
  return sphere_from_chart(1, 1.0 / p.z);
}

inline CPoint from_sphere(const SpherePoint& s) {
  const double n = std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z);
  const double x = s.x / n, y = s.y / n, z = s.z / n;
  if (z >= 0.0) {
    if (z == 1.0) return CPoint::infinity();
    return CPoint::finite(1.0 / Complex{x / (1.0 + z), -y / (1.0 + z)});
  }
  return CPoint::finite(Complex{x / (1.0 - z), y / (1.0 - z)});
}

/// Chordal distance |p - q| / (sqrt(1+|p|^2) sqrt(1+|q|^2)), at most 1.
inline double chordal_distance(const CPoint& p, const CPoint& q) {
  const auto a = p.homogeneous();
  const auto b = q.homogeneous();
  const double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  const double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
  return std::abs(a[0] * b[1] - a[1] * b[0]) / (na * nb);
}

/// Fubini-Study density in a chart coordinate: 1 / (pi (1+|u|^2)^2), total mass 1.
inline double fubini_study_density(Complex u) {
  const double q = 1.0 + std::norm(u);
  return 1.0 / (std::numbers::pi * q * q);
}

}  // namespace arithdyn

#endif  // ARITHDYN_SPHERE_HPP
