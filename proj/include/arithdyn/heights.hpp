#ifndef ARITHDYN_HEIGHTS_HPP
#define ARITHDYN_HEIGHTS_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "arithdyn/morphisms.hpp"
#include "arithdyn/sequence.hpp"

namespace arithdyn {

using MapSequence = SequenceSpec<CheckedMap>;

/// log(height) / normalizer kept as the exact pair (H, Pi). The log is taken
/// once, when value() is asked for.
struct ExactLogHeight {
  Integer height = 1;
  Integer normalizer = 1;

  double log_height() const { return log_abs(height); }
  double value() const { return log_abs(height) / normalizer.get_d(); }
};

struct HeightOptions {
  /// Bit-size cap per coordinate for exact iteration.
  std::size_t budget_bits = std::size_t{1} << 20;
  /// Hard cap on iteration depth for canonical_height.
  std::size_t max_depth = 4096;
};

/// |h_hat(x) - value| <= radius whenever c_used bounds c(f).
struct HeightEstimate {
  double value = 0.0;
  double radius = 0.0;
  std::size_t depth = 0;
  double c_used = 0.0;
  /// The truncation h_depth as an exact pair.
  ExactLogHeight truncation;
  /// The orbit closed up, so the point is preperiodic and h_hat = 0 exactly.
  bool preperiodic = false;
  /// False when the bit budget stopped the loop before radius <= tol.
  bool conforming = true;
};

inline ExactLogHeight naive_height(const ProjectivePoint& p) { return ExactLogHeight{p.height(), 1}; }

/// h_0 ... h_depth along the sequence, each h_a = log H(f_a o ... o f_1 (x)) / prod d.
/// Throws BudgetExceeded when a coordinate outgrows the bit budget.
inline std::vector<ExactLogHeight> height_sequence(const ProjectivePoint& x, const MapSequence& spec, std::size_t depth,
                                                   const HeightOptions& opts = {}) {
  std::vector<ExactLogHeight> out;
  out.reserve(depth + 1);
  ProjectivePoint y = x;
  Integer pi = 1;
  out.push_back({y.height(), pi});
  for (std::size_t a = 0; a < depth; ++a) {
    const CheckedMap& f = spec.at(a);
    y = f(y);
    if (y.max_bits() > opts.budget_bits) throw BudgetExceeded("coordinate exceeds bit budget", a + 1);
    pi *= f.degree();
    out.push_back({y.height(), pi});
  }
  return out;
}

/// Orbit points x, f_1(x), ..., f_depth o ... o f_1(x).
inline std::vector<ProjectivePoint> orbit_points(const ProjectivePoint& x, const MapSequence& spec, std::size_t depth,
                                                 const HeightOptions& opts = {}) {
  std::vector<ProjectivePoint> out{x};
  for (std::size_t a = 0; a < depth; ++a) {
    out.push_back(spec.at(a)(out.back()));
    if (out.back().max_bits() > opts.budget_bits) throw BudgetExceeded("coordinate exceeds bit budget", a + 1);
  }
  return out;
}

/// Iterates until the tail bound 2c / prod d drops below tol. A closed
/// orbit (same point at the same word phase) ends the loop early with the
/// exact answer 0.
inline HeightEstimate canonical_height(const ProjectivePoint& x, const MapSequence& spec, double tol,
                                       const HeightOptions& opts = {}) {
  if (!(tol > 0.0)) throw InputError("canonical_height: tol must be positive");
  HeightEstimate est;
  est.c_used = spec.c_bound();
  ProjectivePoint y = x;
  Integer pi = 1;
  std::map<std::pair<ProjectivePoint, std::size_t>, std::size_t> seen;

  for (std::size_t depth = 0;; ++depth) {
    const double radius = 2.0 * est.c_used / pi.get_d();
    est.depth = depth;
    est.truncation = {y.height(), pi};
    est.value = est.truncation.value();
    est.radius = radius;
    if (radius <= tol) return est;

    if (const auto phase = spec.phase_at(depth)) {
      if (!seen.emplace(std::make_pair(y, *phase), depth).second) {
        est.value = 0.0;
        est.radius = 0.0;
        est.preperiodic = true;
        return est;
      }
    }
    if (depth >= opts.max_depth) {
      est.conforming = false;
      return est;
    }
    const CheckedMap& f = spec.at(depth);
    ProjectivePoint next = f(y);
    if (next.max_bits() > opts.budget_bits) {
      est.conforming = false;
      return est;
    }
    y = std::move(next);
    pi *= f.degree();
  }
}

namespace detail {

// log H1 / P1 == scale * log H2 / P2, decided exactly when the integers stay small.
inline std::optional<bool> exact_log_ratio_equal(const ExactLogHeight& a, const ExactLogHeight& b,
                                                 unsigned long scale) {
  constexpr double kMaxBits = double(1 << 22);
  if (!a.normalizer.fits_ulong_p() || !b.normalizer.fits_ulong_p()) return std::nullopt;
  const unsigned long pa = a.normalizer.get_ui();
  const unsigned long pb = b.normalizer.get_ui();
  if (double(bit_size(a.height)) * double(pb) > kMaxBits) return std::nullopt;
  if (double(bit_size(b.height)) * double(scale) * double(pa) > kMaxBits) return std::nullopt;
  Integer lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), a.height.get_mpz_t(), pb);
  mpz_pow_ui(rhs.get_mpz_t(), b.height.get_mpz_t(), scale * pa);
  return lhs == rhs;
}

}  // namespace detail

/// |h_hat_{S f}(f_1(x)) - d_1 h_hat_f(x)| computed from two independent
/// canonical_height runs; bounded by (1 + d_1) tol. Returns exactly 0 when
/// the two truncations agree as exact integers.
inline double functional_equation_residual(const ProjectivePoint& x, const MapSequence& spec, double tol,
                                           const HeightOptions& opts = {}) {
  const CheckedMap& f1 = spec.at(0);
  const auto lhs = canonical_height(f1(x), spec.shift(), tol, opts);
  const auto rhs = canonical_height(x, spec, tol, opts);
  if (!lhs.conforming || !rhs.conforming) throw BudgetExceeded("functional equation residual", rhs.depth);
  if (lhs.preperiodic && rhs.preperiodic) return 0.0;
  if (!lhs.preperiodic && !rhs.preperiodic) {
    if (auto eq = detail::exact_log_ratio_equal(lhs.truncation, rhs.truncation, f1.degree()); eq && *eq) return 0.0;
  }
  return std::fabs(lhs.value - double(f1.degree()) * rhs.value);
}

}  // namespace arithdyn

#endif  // ARITHDYN_HEIGHTS_HPP
