#ifndef ARITHDYN_MORPHISMS_HPP
#define ARITHDYN_MORPHISMS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/algebra.hpp"

namespace arithdyn {

/// Two-sided bound  -kappa_minus <= h(f(x)) - d h(x) <= kappa_plus  for all
/// x in P^N(Q). Both sides are logs of the integers kept here, so the
/// inequalities can be checked exactly:  H(f(x)) <= plus_bound * H(x)^d  and
/// H(x)^d <= minus_bound * H(f(x)).
struct DistortionCertificate {
  Integer plus_bound = 1;
  Integer minus_bound = 1;
  double kappa_plus = 0.0;
  double kappa_minus = 0.0;
  /// max(kappa_plus, kappa_minus) / d, the certified upper bound for c(f).
  double c_bound = 0.0;
};

/// max_j of the sum of |coefficients| of F_j. Its log bounds the upper side
/// at the archimedean place; finite places contribute <= 0 for integer forms.
inline Integer coefficient_sum_bound(std::span<const IntegerForm> forms) {
  Integer best = 0;
  for (const auto& f : forms) {
    Integer s = 0;
    for (const auto& [e, c] : f.terms()) s += abs(c);
    if (s > best) best = s;
  }
  return best;
}

inline double kappa_plus(std::span<const IntegerForm> forms) { return log_abs(coefficient_sum_bound(forms)); }

/// C * e, where C = max_j sum_k ||G_jk||_1. From e x_j^M = sum_k G_jk F_k:
/// the archimedean place gives max|F(x)| >= (e/C) H(x)^d and the gcd of F(x)
/// divides e.
inline Integer certificate_minus_bound(const NullstellensatzCertificate& cert) {
  Integer best = 0;
  for (const auto& row : cert.cofactors) {
    Integer s = 0;
    for (const auto& g : row) {
      for (const auto& [e, c] : g.terms()) s += abs(c);
    }
    if (s > best) best = s;
  }
  return best * cert.denominator;
}

inline double kappa_minus(const NullstellensatzCertificate& cert) { return log_abs(certificate_minus_bound(cert)); }

/// A morphism P^N -> P^N of degree >= 2 with integer coefficients, a
/// certificate that its forms have no common zero, and the distortion
/// bounds derived from it.
class CheckedMap {
 public:
  const std::string& name() const noexcept { return name_; }
  const std::vector<IntegerForm>& forms() const noexcept { return forms_; }
  unsigned degree() const noexcept { return degree_; }
  std::size_t dimension() const noexcept { return forms_.size() - 1; }
  const NullstellensatzCertificate& certificate() const noexcept { return certificate_; }
  const DistortionCertificate& distortion() const noexcept { return distortion_; }
  double c_bound() const noexcept { return distortion_.c_bound; }

  /// The exact projective image. Never throws MapsToZero for a checked map.
  ProjectivePoint operator()(const ProjectivePoint& p) const { return evaluate_forms(forms_, p); }

  /// Exact test of the distortion inequalities at p.
  bool distortion_holds_at(const ProjectivePoint& p) const {
    const Integer h = p.height();
    const Integer hf = (*this)(p).height();
    Integer hd;
    mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), degree_);
    return hf <= distortion_.plus_bound * hd && hd <= distortion_.minus_bound * hf;
  }

 private:
  friend CheckedMap validate(std::vector<IntegerForm> forms, std::string name, unsigned cap);

  std::string name_;
  std::vector<IntegerForm> forms_;
  unsigned degree_ = 0;
  NullstellensatzCertificate certificate_;
  DistortionCertificate distortion_;
};

/// Validates N+1 integer forms of a common degree d >= 2 as a morphism of
/// P^N and attaches its certificates. Throws DegreeTooSmall, Degenerate,
/// DimensionMismatch.
inline CheckedMap validate(std::vector<IntegerForm> forms, std::string name = {}, unsigned cap = 0) {
  check_map_shape(std::span<const IntegerForm>(forms));
  const unsigned d = forms[0].degree();
  if (d < 2) throw DegreeTooSmall(d);
  for (std::size_t k = 0; k < forms.size(); ++k) {
    if (forms[k].is_zero()) throw Degenerate("form F_" + std::to_string(k) + " is identically zero");
  }
  CheckedMap map;
  map.certificate_ = find_certificate_ascending(std::span<const IntegerForm>(forms), cap);
  map.distortion_.plus_bound = coefficient_sum_bound(forms);
  map.distortion_.minus_bound = certificate_minus_bound(map.certificate_);
  map.distortion_.kappa_plus = log_abs(map.distortion_.plus_bound);
  map.distortion_.kappa_minus = log_abs(map.distortion_.minus_bound);
  map.distortion_.c_bound = std::max(map.distortion_.kappa_plus, map.distortion_.kappa_minus) / d;
  map.name_ = std::move(name);
  map.forms_ = std::move(forms);
  map.degree_ = d;
  return map;
}

/// The power map (x_0^m : ... : x_N^m).
inline std::vector<IntegerForm> power_map_forms(std::size_t n, unsigned m) {
  std::vector<IntegerForm> forms;
  for (std::size_t j = 0; j <= n; ++j) forms.push_back(IntegerForm::variable_power(n + 1, j, m));
  return forms;
}

/// (x_0^m + x_1^m : x_1^m : ... : x_N^m).
inline std::vector<IntegerForm> perturbed_power_map_forms(std::size_t n, unsigned m) {
  auto forms = power_map_forms(n, m);
  forms[0] = forms[0] + IntegerForm::variable_power(n + 1, 1, m);
  return forms;
}

inline CheckedMap power_map(std::size_t n, unsigned m) {
  return validate(power_map_forms(n, m), "g'" + std::to_string(m));
}

inline CheckedMap perturbed_power_map(std::size_t n, unsigned m) {
  return validate(perturbed_power_map_forms(n, m), "g''" + std::to_string(m));
}

}  // namespace arithdyn

#endif  // ARITHDYN_MORPHISMS_HPP
