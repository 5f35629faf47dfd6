#ifndef ARITHDYN_ROOTS_HPP
#define ARITHDYN_ROOTS_HPP

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "arithdyn/errors.hpp"
#include "arithdyn/sphere.hpp"

namespace arithdyn {

struct WeightedPoint {
  CPoint point;
  std::uint64_t multiplicity = 1;
};

struct RootOptions {
  /// Accept a root when |form(unit representative)| <= tol * |coefficients|_1.
  double residual_tol = 1e-10;
  /// Roots closer than this in the chordal metric merge into one cluster.
  double cluster_radius = 1e-6;
  unsigned newton_steps = 30;
  unsigned aberth_steps = 500;
};

namespace detail {

// Horner evaluation of p(z) = sum c_k z^k and its derivative.
inline std::pair<Complex, Complex> horner(const std::vector<Complex>& c, Complex z) {
  Complex p{}, dp{};
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
  return {p, dp};
}

inline double binary_residual(const std::vector<Complex>& c, const CPoint& pt) {
  auto x = pt.homogeneous();
  const double n = std::sqrt(std::norm(x[0]) + std::norm(x[1]));
  x[0] /= n;
  x[1] /= n;
  const std::size_t d = c.size() - 1;
  Complex acc{};
  for (std::size_t k = 0; k <= d; ++k) acc += c[k] * std::pow(x[0], int(d - k)) * std::pow(x[1], int(k));
  return std::abs(acc);
}

// Newton on p for |z| <= 1, on the reversed polynomial in w = 1/z otherwise.
inline Complex polish(const std::vector<Complex>& p, Complex z, unsigned steps) {
  std::vector<Complex> rev(p.rbegin(), p.rend());
  auto residual = [&](Complex t) {
    return std::abs(t) <= 1.0 ? std::abs(horner(p, t).first) : std::abs(horner(rev, 1.0 / t).first);
  };
  double best = residual(z);
  for (unsigned it = 0; it < steps && best > 0.0; ++it) {
    Complex next;
    if (std::abs(z) <= 1.0) {
      const auto [v, dv] = horner(p, z);
      if (dv == Complex{}) break;
      next = z - v / dv;
    } else {
      const Complex w = 1.0 / z;
      const auto [v, dv] = horner(rev, w);
      if (dv == Complex{}) break;
      const Complex wn = w - v / dv;
      if (wn == Complex{}) break;
      next = 1.0 / wn;
    }
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    const double r = residual(next);
    if (!(r < best)) break;
    best = r;
    z = next;
  }
  return z;
}

inline std::optional<std::vector<Complex>> companion_roots(const std::vector<Complex>& p) {
  const auto m = static_cast<Eigen::Index>(p.size() - 1);
  if (m == 1) return std::vector<Complex>{-p[0] / p[1]};
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index i = 1; i < m; ++i) a(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) a(i, m - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
  if (solver.info() != Eigen::Success) return std::nullopt;
  std::vector<Complex> out(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return out;
}

// Aberth-Ehrlich simultaneous iteration from points on a circle.
inline std::vector<Complex> aberth_roots(const std::vector<Complex>& p, unsigned steps) {
  const std::size_t m = p.size() - 1;
  double bound = 0.0;
  for (std::size_t k = 0; k < m; ++k) bound = std::max(bound, std::abs(p[k] / p[m]));
  const double radius = 1.0 + bound;
  std::vector<Complex> z(m);
  for (std::size_t k = 0; k < m; ++k)
    z[k] = std::polar(0.5 * radius, 2.0 * std::numbers::pi * (double(k) + 0.25) / double(m));
  for (unsigned it = 0; it < steps; ++it) {
    double moved = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto [v, dv] = horner(p, z[k]);
      if (v == Complex{}) continue;
      const Complex ratio = v / dv;
      Complex repulse{};
      for (std::size_t j = 0; j < m; ++j) {
        if (j != k && z[j] != z[k]) repulse += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulse);
      z[k] -= step;
      moved = std::max(moved, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (moved < 1e-15) break;
  }
  return z;
}

inline std::vector<WeightedPoint> cluster(const std::vector<CPoint>& roots, double radius) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<CPoint> heads;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    bool placed = false;
    for (std::size_t g = 0; g < groups.size() && !placed; ++g) {
      if (chordal_distance(heads[g], roots[i]) <= radius) {
        groups[g].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      groups.push_back({i});
      heads.push_back(roots[i]);
    }
  }
  std::vector<WeightedPoint> out;
  for (const auto& g : groups) {
    if (g.size() == 1) {
      out.push_back({roots[g[0]], 1});
      continue;
    }
    SpherePoint mean;
    for (std::size_t i : g) {
      const auto s = to_sphere(roots[i]);
      mean.x += s.x;
      mean.y += s.y;
      mean.z += s.z;
    }
    out.push_back({from_sphere(mean), g.size()});
  }
  return out;
}

}  // namespace detail

/// Roots on P^1 of the binary form sum_k c[k] x_0^(d-k) x_1^k, with
/// multiplicities summing to d. A drop in the degree of the affine
/// polynomial in z = x_1/x_0 is a root at infinity.
inline std::vector<WeightedPoint> binary_form_roots(const std::vector<Complex>& c, const RootOptions& opts = {}) {
  if (c.size() < 2) throw InputError("binary_form_roots: degree must be at least 1");
  const std::size_t d = c.size() - 1;
  double norm1 = 0.0;
  for (const auto& v : c) norm1 += std::abs(v);
  if (norm1 == 0.0) throw InputError("binary_form_roots: zero form");
  const double negligible = 4.0 * DBL_EPSILON * norm1;
  std::size_t top = d;
  while (top > 0 && std::abs(c[top]) <= negligible) --top;

  std::vector<CPoint> roots(d - top, CPoint::infinity());
  if (top > 0) {
    std::vector<Complex> p(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(top + 1));
    auto finite = detail::companion_roots(p);
    auto accept = [&](std::vector<Complex>& zs) {
      for (auto& z : zs) z = detail::polish(p, z, opts.newton_steps);
      for (const auto& z : zs) {
        if (detail::binary_residual(c, CPoint::finite(z)) > opts.residual_tol * norm1) return false;
      }
      return true;
    };
    if (!finite || !accept(*finite)) {
      auto fallback = detail::aberth_roots(p, opts.aberth_steps);
      if (!accept(fallback)) {
        double worst = 0.0;
        for (const auto& z : fallback) worst = std::max(worst, detail::binary_residual(c, CPoint::finite(z)));
        throw RootFindingFailed(worst / norm1);
      }
      finite = std::move(fallback);
    }
    for (const auto& z : *finite) roots.push_back(CPoint::finite(z));
  }
  return detail::cluster(roots, opts.cluster_radius);
}

}  // namespace arithdyn

#endif  // ARITHDYN_ROOTS_HPP
