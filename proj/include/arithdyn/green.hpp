#ifndef ARITHDYN_GREEN_HPP
#define ARITHDYN_GREEN_HPP

// Green functions G(x) = lim (1/prod d) log|F^i o ... o F^1(x)|^2 of a
// sequence of lifts, the potential psi = log|x|^2 - G of the invariant
// metric, and pairings <T, phi> with the Green current on P^1.
//
// Normalization: dd^c = (i/2pi) d dbar, so for a function of one complex
// variable dd^c phi = (Laplacian phi / 4pi) dx dy and the Fubini-Study form
// dd^c log(1+|z|^2) = dx dy / (pi (1+|z|^2)^2) has total mass 1. Then
// T = omega_FS - dd^c psi and <T, phi> = int phi omega_FS - int psi dd^c phi.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arithdyn/lift.hpp"
#include "arithdyn/parallel.hpp"
#include "arithdyn/sphere.hpp"

namespace arithdyn {

struct GreenOptions {
  /// |F(v)| below this for a unit vector v counts as a numerical common zero.
  double underflow = 1e-200;
  std::size_t max_depth = 4096;
};

struct GreenValue {
  double value = 0.0;
  std::size_t depth = 0;
  /// |G(x) - value| <= radius, from the tail sum of c_bar / 2^(alpha-2).
  double radius = 0.0;
};

namespace detail {

inline double euclidean_norm(std::span<const Complex> x) {
  double s = 0.0;
  for (const auto& c : x) s += std::norm(c);
  return std::sqrt(s);
}

// Runs the rescaled recursion and reports sum_alpha log|F^alpha(v)| / prod d
// (the part of G/2 beyond log|x|). `observe(depth, partial)` sees every step.
template <class Lifts, class Observe>
GreenValue rescaled_orbit(const Lifts& lifts, std::span<const Complex> x, double tol, std::size_t fixed_depth,
                          const GreenOptions& opts, Observe&& observe) {
  const double norm = euclidean_norm(x);
  if (!(norm > 0.0)) throw NonzeroRequired();
  std::vector<Complex> v(x.begin(), x.end());
  for (auto& c : v) c /= norm;
  const double c_bar = lifts.c_bound();
  double pi = 1.0;
  double acc = 0.0;
  GreenValue out;
  for (std::size_t depth = 0;; ++depth) {
    out.depth = depth;
    out.value = acc;
    out.radius = 4.0 * c_bar / pi;
    observe(depth, acc);
    if (fixed_depth != std::size_t(-1) ? depth >= fixed_depth : out.radius <= tol) return out;
    if (depth >= opts.max_depth) throw BudgetExceeded("Green function depth cap", depth);
    const auto& f = lifts.at(depth);
    if (f.dimension() + 1 != v.size()) throw DimensionMismatch("point and lift differ in dimension");
    auto w = f(std::span<const Complex>(v));
    const double n = euclidean_norm(w);
    if (!(n > opts.underflow)) throw DegenerateNearZero(depth + 1);
    for (auto& c : w) c /= n;
    v = std::move(w);
    pi *= f.degree();
    acc += std::log(n) / pi;
  }
}

}  // namespace detail

/// G(x) to within tol. Works for any sequence type exposing at(pos) and c_bound().
template <class Lifts>
GreenValue green_function(const Lifts& lifts, std::span<const Complex> x, double tol, const GreenOptions& opts = {}) {
  if (!(tol > 0.0)) throw InputError("green_function: tol must be positive");
  auto g = detail::rescaled_orbit(lifts, x, tol, std::size_t(-1), opts, [](std::size_t, double) {});
  g.value = 2.0 * (std::log(detail::euclidean_norm(x)) + g.value);
  return g;
}

/// G_0(x), ..., G_depth(x).
template <class Lifts>
std::vector<double> green_iterates(const Lifts& lifts, std::span<const Complex> x, std::size_t depth,
                                   const GreenOptions& opts = {}) {
  std::vector<double> out;
  const double base = std::log(detail::euclidean_norm(x));
  detail::rescaled_orbit(lifts, x, 1.0, depth, opts, [&](std::size_t, double acc) { out.push_back(2.0 * (base + acc)); });
  return out;
}

/// psi(x) = log|x|^2 - G(x), computed from the unit vector alone so that it is
/// invariant under x -> lambda x.
template <class Lifts>
GreenValue admissible_potential(const Lifts& lifts, std::span<const Complex> x, double tol,
                                const GreenOptions& opts = {}) {
  if (!(tol > 0.0)) throw InputError("admissible_potential: tol must be positive");
  auto g = detail::rescaled_orbit(lifts, x, tol, std::size_t(-1), opts, [](std::size_t, double) {});
  g.value = -2.0 * g.value;
  return g;
}

/// Smooth test functions on P^1 with dd^c known in closed form, plus a
/// sampled kind whose dd^c comes from a five-point stencil.
class TestFunction {
 public:
  enum class Kind { One, Re, Im, Height, XY, ZonalQuadratic, XXminusYY, Bump, Sampled };
  using SphereFn = std::function<double(const SpherePoint&)>;

  static TestFunction one() { return TestFunction(Kind::One, "one"); }
  /// X/2 = Re z / (1+|z|^2).
  static TestFunction re() { return TestFunction(Kind::Re, "re"); }
  /// Y/2 = Im z / (1+|z|^2).
  static TestFunction im() { return TestFunction(Kind::Im, "im"); }
  /// Z = (|z|^2 - 1) / (|z|^2 + 1).
  static TestFunction height() { return TestFunction(Kind::Height, "z"); }
  /// X Y, a degree-2 spherical harmonic.
  static TestFunction xy() { return TestFunction(Kind::XY, "xy"); }
  /// Z^2 - 1/3, the zonal degree-2 harmonic.
  static TestFunction z2() { return TestFunction(Kind::ZonalQuadratic, "z2"); }
  /// X^2 - Y^2.
  static TestFunction x2y2() { return TestFunction(Kind::XXminusYY, "x2y2"); }
  /// exp(1 - 1/(1-s)) with s = |z|^2 / radius^2, supported in |z| < radius <= 1.
  static TestFunction bump(double radius = 0.5) {
    if (!(radius > 0.0 && radius <= 1.0)) throw InputError("bump radius must lie in (0, 1]");
    TestFunction t(Kind::Bump, radius == 0.5 ? "bump" : "bump:" + std::to_string(radius));
    t.radius_ = radius;
    return t;
  }
  static TestFunction sampled(std::string name, SphereFn f, double step = 1e-3) {
    TestFunction t(Kind::Sampled, std::move(name));
    t.fn_ = std::move(f);
    t.step_ = step;
    return t;
  }

  /// one, re, im, z, xy, z2, x2y2, bump, bump:<radius>, and stencil:<name> for the
  /// stencil version of a built-in.
  static TestFunction parse(std::string_view spec) {
    if (spec.starts_with("stencil:")) {
      const auto inner = parse(spec.substr(8));
      return sampled(std::string(spec), [inner](const SpherePoint& p) { return inner.at(p); });
    }
    if (spec == "one") return one();
    if (spec == "re") return re();
    if (spec == "im") return im();
    if (spec == "z") return height();
    if (spec == "xy") return xy();
    if (spec == "z2") return z2();
    if (spec == "x2y2") return x2y2();
    if (spec == "bump") return bump();
    if (spec.starts_with("bump:")) {
      try {
        return bump(std::stod(std::string(spec.substr(5))));
      } catch (const std::logic_error&) {
        throw ConfigError("bad bump radius in '" + std::string(spec) + "'");
      }
    }
    throw ConfigError("unknown test function '" + std::string(spec) + "'");
  }

  /// The closed-form family, constant function first.
  static std::vector<TestFunction> builtins() { return {one(), re(), im(), height(), xy(), z2(), x2y2(), bump()}; }

  const std::string& name() const noexcept { return name_; }
  Kind kind() const noexcept { return kind_; }
  bool is_constant() const noexcept { return kind_ == Kind::One; }

  double at(const SpherePoint& p) const {
    switch (kind_) {
      case Kind::One: return 1.0;
      case Kind::Re: return 0.5 * p.x;
      case Kind::Im: return 0.5 * p.y;
      case Kind::Height: return p.z;
      case Kind::XY: return p.x * p.y;
      case Kind::ZonalQuadratic: return p.z * p.z - 1.0 / 3.0;
      case Kind::XXminusYY: return p.x * p.x - p.y * p.y;
      case Kind::Bump: return bump_profile(from_sphere(p));
      case Kind::Sampled: return fn_(p);
    }
    return 0.0;
  }

  double value(const CPoint& p) const { return at(to_sphere(p)); }

  double in_chart(int chart, Complex u) const {
    if (kind_ == Kind::Bump) return bump_profile(chart_point(chart, u));
    return at(sphere_from_chart(chart, u));
  }

  /// Density of dd^c phi with respect to dx dy in the chart coordinate u.
  double ddc_density(int chart, Complex u) const {
    switch (kind_) {
      case Kind::One: return 0.0;
      case Kind::Re:
      case Kind::Im:
      case Kind::Height: return -2.0 * in_chart(chart, u) * fubini_study_density(u);
      case Kind::XY:
      case Kind::ZonalQuadratic:
      case Kind::XXminusYY: return -6.0 * in_chart(chart, u) * fubini_study_density(u);
      case Kind::Bump: {
        if (chart == 0) return bump_ddc(u);
        if (u == Complex{}) return 0.0;
        // z = 1/w, so the density picks up |dz/dw|^2 = |w|^-4.
        const double r2 = std::norm(u);
        return bump_ddc(1.0 / u) / (r2 * r2);
      }
      case Kind::Sampled: {
        const double h = step_;
        const double lap = in_chart(chart, u + h) + in_chart(chart, u - h) + in_chart(chart, u + Complex{0, h}) +
                           in_chart(chart, u - Complex{0, h}) - 4.0 * in_chart(chart, u);
        return lap / (h * h) / (4.0 * std::numbers::pi);
      }
    }
    return 0.0;
  }

 private:
  TestFunction(Kind k, std::string name) : kind_(k), name_(std::move(name)) {}

  static CPoint chart_point(int chart, Complex u) {
    if (chart == 0) return CPoint::finite(u);
    if (u == Complex{}) return CPoint::infinity();
    return CPoint::finite(1.0 / u);
  }

  double bump_profile(const CPoint& p) const {
    if (p.at_infinity) return 0.0;
    const double s = std::norm(p.z) / (radius_ * radius_);
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s));
  }

  // Laplacian of u(s), s = |z|^2/rho^2, is 4 (u' + s u'') / rho^2.
  double bump_ddc(Complex z) const {
    const double s = std::norm(z) / (radius_ * radius_);
    if (s >= 1.0) return 0.0;
    const double q = 1.0 / (1.0 - s);
    const double u = std::exp(1.0 - q);
    const double du = -q * q * u;
    const double d2u = (q * q * q * q - 2.0 * q * q * q) * u;
    return (du + s * d2u) / (std::numbers::pi * radius_ * radius_);
  }

  Kind kind_;
  std::string name_;
  double radius_ = 0.5;
  double step_ = 1e-3;
  SphereFn fn_;
};

/// psi sampled on polar midpoint grids over the unit disks of both charts:
/// chart 0 covers |z| <= 1, chart 1 covers |z| >= 1 through w = 1/z. The two
/// disks meet only along the unit circle, so their indicators form the
/// partition of unity; a kink of psi on that circle costs nothing.
class PotentialGrid {
 public:
  template <class Lifts>
  static PotentialGrid build(const Lifts& lifts, std::size_t resolution, double tol, unsigned workers = 1,
                             const GreenOptions& opts = {}) {
    if (resolution == 0) throw InputError("grid resolution must be positive");
    PotentialGrid g;
    g.n_ = resolution;
    g.psi_.assign(2 * resolution * resolution, 0.0);
    parallel_for(g.psi_.size(), workers, [&](std::size_t idx) {
      const int chart = idx < resolution * resolution ? 0 : 1;
      const std::size_t local = idx % (resolution * resolution);
      const Complex u = g.node(local / resolution, local % resolution);
      const std::array<Complex, 2> x = chart == 0 ? std::array<Complex, 2>{1.0, u} : std::array<Complex, 2>{u, 1.0};
      g.psi_[idx] = admissible_potential(lifts, std::span<const Complex>(x), tol, opts).value;
    });
    g.tol_ = tol;
    return g;
  }

  std::size_t resolution() const noexcept { return n_; }
  double tolerance() const noexcept { return tol_; }

  /// Node (a, b): radius (a + 1/2)/n, angle 2 pi (b + 1/2)/n.
  Complex node(std::size_t a, std::size_t b) const {
    const double r = (double(a) + 0.5) / double(n_);
    const double t = 2.0 * std::numbers::pi * (double(b) + 0.5) / double(n_);
    return std::polar(r, t);
  }
  double weight(std::size_t a) const {
    return (double(a) + 0.5) / double(n_) * (1.0 / double(n_)) * (2.0 * std::numbers::pi / double(n_));
  }
  double psi(int chart, std::size_t a, std::size_t b) const {
    return psi_[std::size_t(chart) * n_ * n_ + a * n_ + b];
  }

  /// Adds `shift` to every stored potential (psi changes by a constant under lift scaling).
  PotentialGrid shifted(double shift) const {
    PotentialGrid g = *this;
    for (auto& p : g.psi_) p += shift;
    return g;
  }

 private:
  std::size_t n_ = 0;
  double tol_ = 0.0;
  std::vector<double> psi_;
};

/// <T, phi> = int phi omega_FS - int psi dd^c phi by quadrature. Since
/// int dd^c phi = 0, psi is first centred on its Fubini-Study mean; this
/// leaves the exact pairing unchanged and makes the quadrature blind to
/// constant shifts of psi.
inline double current_pairing(const PotentialGrid& grid, const TestFunction& phi) {
  const std::size_t n = grid.resolution();
  long double mass = 0.0L, moment = 0.0L;
  for (int chart = 0; chart < 2; ++chart) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const long double fs = fubini_study_density(grid.node(a, b)) * grid.weight(a);
        mass += fs;
        moment += fs * grid.psi(chart, a, b);
      }
    }
  }
  const double centre = static_cast<double>(moment / mass);

  long double total = 0.0L;
  for (int chart = 0; chart < 2; ++chart) {
    for (std::size_t a = 0; a < n; ++a) {
      const double w = grid.weight(a);
      long double ring = 0.0L;
      for (std::size_t b = 0; b < n; ++b) {
        const Complex u = grid.node(a, b);
        ring += phi.in_chart(chart, u) * fubini_study_density(u) -
                (grid.psi(chart, a, b) - centre) * phi.ddc_density(chart, u);
      }
      total += ring * w;
    }
  }
  return static_cast<double>(total);
}

template <class Lifts>
double current_pairing(const Lifts& lifts, const TestFunction& phi, std::size_t resolution = 512, double tol = 1e-8,
                       unsigned workers = 1) {
  if (lifts.at(0).dimension() != 1) throw UnsupportedDimension(lifts.at(0).dimension());
  return current_pairing(PotentialGrid::build(lifts, resolution, tol, workers), phi);
}

/// A sequence of lifts with the first m lifts multiplied by c_1, ..., c_m.
class ScaledLiftSequence {
 public:
  ScaledLiftSequence(LiftSequence base, const std::vector<Complex>& scalars) : base_(std::move(base)) {
    for (std::size_t k = 0; k < scalars.size(); ++k) scaled_.push_back(base_.at(k).scaled(scalars[k]));
    c_bar_ = base_.c_bound();
    for (const auto& f : scaled_) c_bar_ = std::max(c_bar_, f.c_bar());
  }

  const ComplexLiftMap& at(std::size_t pos) const { return pos < scaled_.size() ? scaled_[pos] : base_.at(pos); }
  double c_bound() const noexcept { return c_bar_; }
  const LiftSequence& base() const noexcept { return base_; }

 private:
  LiftSequence base_;
  std::vector<ComplexLiftMap> scaled_;
  double c_bar_ = 0.0;
};

/// sum_k log|c_k|^2 / prod_{beta <= k} d_beta.
inline double predicted_scaling_shift(const LiftSequence& base, const std::vector<Complex>& scalars) {
  double pi = 1.0, s = 0.0;
  for (std::size_t k = 0; k < scalars.size(); ++k) {
    pi *= base.at(k).degree();
    s += 2.0 * std::log(std::abs(scalars[k])) / pi;
  }
  return s;
}

struct LiftScalingReport {
  double predicted = 0.0;
  double observed = 0.0;
  double green_error = 0.0;
  double potential_error = 0.0;
  /// Largest |<T', phi> - <T, phi>| over the supplied test functions.
  double pairing_difference = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Compares G and psi at x for the original and scaled lifts, and the
/// current pairings computed from full potential grids of both.
inline LiftScalingReport lift_scaling_check(const LiftSequence& base, const std::vector<Complex>& scalars,
                                            std::span<const Complex> x, double tol,
                                            std::span<const TestFunction> phis = {}, std::size_t resolution = 64,
                                            double quadrature_tol = 1e-3, unsigned workers = 1) {
  for (const auto& c : scalars) {
    if (c == Complex{}) throw NonzeroRequired();
  }
  const ScaledLiftSequence scaled(base, scalars);
  LiftScalingReport r;
  r.tol = tol;
  r.predicted = predicted_scaling_shift(base, scalars);
  const auto g0 = green_function(base, x, tol);
  const auto g1 = green_function(scaled, x, tol);
  r.observed = g1.value - g0.value;
  r.green_error = std::fabs(r.observed - r.predicted);
  const auto p0 = admissible_potential(base, x, tol);
  const auto p1 = admissible_potential(scaled, x, tol);
  r.potential_error = std::fabs((p0.value - p1.value) - r.predicted);
  if (!phis.empty()) {
    const auto grid0 = PotentialGrid::build(base, resolution, tol, workers);
    const auto grid1 = PotentialGrid::build(scaled, resolution, tol, workers);
    for (const auto& phi : phis)
      r.pairing_difference =
          std::max(r.pairing_difference, std::fabs(current_pairing(grid1, phi) - current_pairing(grid0, phi)));
  }
  r.pass = r.green_error <= 2.0 * tol + (g0.radius + g1.radius) && r.potential_error <= 2.0 * tol + (p0.radius + p1.radius) &&
           r.pairing_difference <= quadrature_tol;
  return r;
}

struct GreenGridRow {
  double x = 0.0, y = 0.0, green = 0.0, potential = 0.0;
};

/// G and psi at (1, z) for z on an n x n grid over [-extent, extent]^2.
template <class Lifts>
std::vector<GreenGridRow> green_grid(const Lifts& lifts, std::size_t n, double extent, double tol,
                                     unsigned workers = 1) {
  if (n < 2) throw InputError("green grid needs at least 2 points per side");
  std::vector<GreenGridRow> rows(n * n);
  parallel_for(rows.size(), workers, [&](std::size_t idx) {
    const double x = -extent + 2.0 * extent * double(idx % n) / double(n - 1);
    const double y = -extent + 2.0 * extent * double(idx / n) / double(n - 1);
    const std::array<Complex, 2> v{1.0, Complex{x, y}};
    const auto g = green_function(lifts, std::span<const Complex>(v), tol);
    const auto p = admissible_potential(lifts, std::span<const Complex>(v), tol);
    rows[idx] = {x, y, g.value, p.value};
  });
  return rows;
}

}  // namespace arithdyn

#endif  // ARITHDYN_GREEN_HPP
