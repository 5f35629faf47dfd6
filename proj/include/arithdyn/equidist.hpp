#ifndef ARITHDYN_EQUIDIST_HPP
#define ARITHDYN_EQUIDIST_HPP

// Backward orbits on P^1: the depth-j cloud is the full preimage multiset of
// a under f_j o ... o f_1, and its normalized counting measure is compared
// with the Green current of the sequence.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arithdyn/green.hpp"
#include "arithdyn/roots.hpp"

namespace arithdyn {

/// Preimages of a under one lift: the roots of a_1 F_0 - a_0 F_1.
inline std::vector<WeightedPoint> preimages_one_step(const ComplexLiftMap& f, const CPoint& a,
                                                     const RootOptions& opts = {}) {
  if (f.dimension() != 1) throw UnsupportedDimension(f.dimension());
  const auto x = a.homogeneous();
  const auto c0 = binary_coefficients(f.forms()[0]);
  const auto c1 = binary_coefficients(f.forms()[1]);
  std::vector<Complex> c(c0.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = x[1] * c0[k] - x[0] * c1[k];
  return binary_form_roots(c, opts);
}

inline CPoint apply_lift(const ComplexLiftMap& f, const CPoint& p) {
  const auto x = p.homogeneous();
  const auto y = f(std::span<const Complex>(x.data(), x.size()));
  return CPoint::from_homogeneous(y[0], y[1]);
}

struct PreimageCloud {
  CPoint source;
  std::size_t depth = 0;
  /// prod_{alpha <= depth} d_alpha, which the multiplicities sum to.
  std::uint64_t total = 1;
  std::vector<WeightedPoint> points;

  std::uint64_t count() const {
    std::uint64_t s = 0;
    for (const auto& p : points) s += p.multiplicity;
    return s;
  }
};

struct CloudOptions {
  std::uint64_t budget = std::uint64_t{1} << 16;
  unsigned workers = 1;
  RootOptions roots;
};

/// Solves f_j first and f_1 last, so that f_j o ... o f_1 maps every point to a.
inline PreimageCloud preimage_cloud(const LiftSequence& lifts, const CPoint& a, std::size_t depth,
                                    const CloudOptions& opts = {}) {
  PreimageCloud cloud;
  cloud.source = a;
  cloud.depth = depth;
  for (std::size_t alpha = 0; alpha < depth; ++alpha) {
    cloud.total *= lifts.at(alpha).degree();
    if (cloud.total > opts.budget) throw BudgetExceeded("preimage cloud exceeds the point budget", alpha + 1);
  }
  cloud.points = {{a, 1}};
  for (std::size_t level = depth; level-- > 0;) {
    const auto& f = lifts.at(level);
    std::vector<std::vector<WeightedPoint>> branches(cloud.points.size());
    parallel_for(cloud.points.size(), opts.workers, [&](std::size_t i) {
      branches[i] = preimages_one_step(f, cloud.points[i].point, opts.roots);
      for (auto& p : branches[i]) p.multiplicity *= cloud.points[i].multiplicity;
    });
    std::vector<WeightedPoint> next;
    next.reserve(cloud.points.size() * f.degree());
    for (auto& b : branches) next.insert(next.end(), b.begin(), b.end());
    cloud.points = std::move(next);
  }
  return cloud;
}

/// Largest chordal distance between f_j o ... o f_1(y) and a over the cloud.
inline double round_trip_error(const LiftSequence& lifts, const PreimageCloud& cloud) {
  double worst = 0.0;
  for (const auto& p : cloud.points) {
    CPoint y = p.point;
    for (std::size_t alpha = 0; alpha < cloud.depth; ++alpha) y = apply_lift(lifts.at(alpha), y);
    worst = std::max(worst, chordal_distance(y, cloud.source));
  }
  return worst;
}

/// (1 / prod d) sum_y mult(y) phi(y).
inline double empirical_pairing(const PreimageCloud& cloud, const TestFunction& phi) {
  long double s = 0.0L;
  for (const auto& p : cloud.points) s += static_cast<long double>(p.multiplicity) * phi.value(p.point);
  return static_cast<double>(s / static_cast<long double>(cloud.total));
}

struct EquidistRow {
  std::size_t depth = 0;
  std::string phi;
  double empirical = 0.0;
  double current = 0.0;
  double delta = 0.0;
  double round_trip = 0.0;
};

struct EquidistTrend {
  std::string phi;
  /// Depths j < k listed in order with delta(k) > delta(j) for consecutive depths.
  std::vector<std::pair<std::size_t, std::size_t>> inversions;
  /// delta at the deepest level is below delta at the shallowest.
  bool decreased = false;
  /// Resolution of delta: |<T, phi>_n - <T, phi>_{n/2}| plus a rounding allowance.
  double floor = 0.0;
  /// delta at the shallowest depth lies above the floor, so a decrease is observable.
  bool resolved = false;
  /// decreased when resolved; otherwise delta stays within the floor at the deepest level.
  bool holds = false;
};

/// Absolute rounding allowance added to the quadrature-based resolution floor.
inline constexpr double kEquidistRoundoff = 1e-12;

struct EquidistReport {
  std::vector<EquidistRow> rows;
  std::vector<EquidistTrend> trends;
  std::size_t grid = 0;

  double delta(std::size_t depth, const std::string& phi) const {
    for (const auto& r : rows) {
      if (r.depth == depth && r.phi == phi) return r.delta;
    }
    throw InputError("no row for depth " + std::to_string(depth) + " and phi " + phi);
  }
};

/// Delta(j, phi) = |empirical pairing of the depth-j cloud - <T, phi>| for
/// every requested depth and test function. The potential grid is built once.
inline EquidistReport equidistribution_report(const LiftSequence& lifts, const CPoint& a,
                                              std::span<const std::size_t> depths,
                                              std::span<const TestFunction> phis, std::size_t grid = 512,
                                              double tol = 1e-8, const CloudOptions& opts = {}) {
  if (lifts.at(0).dimension() != 1) throw UnsupportedDimension(lifts.at(0).dimension());
  EquidistReport report;
  report.grid = grid;
  const auto potentials = PotentialGrid::build(lifts, grid, tol, opts.workers);
  const auto coarse = PotentialGrid::build(lifts, std::max<std::size_t>(grid / 2, 1), tol, opts.workers);
  std::vector<double> current, floors;
  for (const auto& phi : phis) {
    current.push_back(current_pairing(potentials, phi));
    floors.push_back(std::fabs(current.back() - current_pairing(coarse, phi)) + kEquidistRoundoff);
  }
  for (std::size_t j : depths) {
    const auto cloud = preimage_cloud(lifts, a, j, opts);
    const double rt = round_trip_error(lifts, cloud);
    for (std::size_t k = 0; k < phis.size(); ++k) {
      EquidistRow row;
      row.depth = j;
      row.phi = phis[k].name();
      row.empirical = empirical_pairing(cloud, phis[k]);
      row.current = current[k];
      row.delta = std::fabs(row.empirical - row.current);
      row.round_trip = rt;
      report.rows.push_back(row);
    }
  }
  for (std::size_t k = 0; k < phis.size() && !depths.empty(); ++k) {
    EquidistTrend t;
    t.phi = phis[k].name();
    for (std::size_t i = 1; i < depths.size(); ++i) {
      if (report.delta(depths[i], t.phi) > report.delta(depths[i - 1], t.phi))
        t.inversions.emplace_back(depths[i - 1], depths[i]);
    }
    const double first = report.delta(depths.front(), t.phi);
    const double last = report.delta(depths.back(), t.phi);
    t.decreased = last < first;
    t.floor = floors[k];
    t.resolved = first > t.floor;
    t.holds = t.resolved ? t.decreased : last <= t.floor;
    report.trends.push_back(std::move(t));
  }
  return report;
}

}  // namespace arithdyn

#endif  // ARITHDYN_EQUIDIST_HPP
