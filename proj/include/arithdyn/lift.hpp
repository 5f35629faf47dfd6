#ifndef ARITHDYN_LIFT_HPP
#define ARITHDYN_LIFT_HPP

// Complex lifts F = (F_0, ..., F_N) of morphisms of P^N and their
// archimedean distortion bound c_bar. For a unit vector v,
//
//   lower <= log|F(v)| / d <= upper,
//
// with upper from |F_k(v)| <= S_k (coefficient sums) and lower from a
// certificate x_j^M = sum_k G_jk F_k + R_j: some |v_j| >= (N+1)^(-1/2), so
// (N+1)^(-M/2) - |R| <= C |F(v)| with C = max_j sum_k |G_jk|_1.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "arithdyn/heights.hpp"
#include "arithdyn/morphisms.hpp"
#include "arithdyn/sequence.hpp"
#include "arithdyn/sphere.hpp"

namespace arithdyn {

using ComplexForm = HomogeneousForm<Complex>;

/// How the lower distortion constant was obtained.
struct LiftCertificate {
  unsigned exponent = 0;
  /// max_j sum_k |G_jk|_1 for the identity x_j^M = sum_k G_jk F_k + R_j.
  double cofactor_norm = 0.0;
  /// max_j |R_j|_1; zero when the identity is exact over Q.
  double residual = 0.0;
  bool exact = false;
};

struct LiftOptions {
  /// |det| of the row-normalized Sylvester matrix below this is treated as a common zero (P^1).
  double resultant_threshold = 1e-12;
  /// Largest certificate exponent tried; 0 means (N+1)(d-1)+1.
  unsigned certificate_cap = 0;
};

namespace detail {

inline double coefficient_norm1(const ComplexForm& f) {
  double s = 0.0;
  for (const auto& [e, c] : f.terms()) s += std::abs(c);
  return s;
}

inline double normalized_sylvester_determinant(const ComplexForm& f0, const ComplexForm& f1) {
  const unsigned d = f0.degree();
  const auto a = binary_coefficients(f0);
  const auto b = binary_coefficients(f1);
  const Eigen::Index n = 2 * d;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (unsigned r = 0; r < d; ++r) {
    for (unsigned k = 0; k <= d; ++k) {
      s(r, r + k) = a[k];
      s(d + r, r + k) = b[k];
    }
  }
  for (Eigen::Index r = 0; r < n; ++r) {
    const double nr = s.row(r).norm();
    if (nr == 0.0) return 0.0;
    s.row(r) /= nr;
  }
  return std::abs(s.partialPivLu().determinant());
}

// Least-squares certificate at exponent M; returns false if the residual is
// too large to give a positive lower bound.
inline bool numeric_certificate(std::span<const ComplexForm> forms, unsigned exponent, LiftCertificate& out) {
  const std::size_t n = forms.size();
  const unsigned d = forms[0].degree();
  const auto rows = monomials(n, exponent);
  const auto cols = monomials(n, exponent - d);
  std::map<Exponent, Eigen::Index> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of.emplace(rows[i], static_cast<Eigen::Index>(i));
  const auto U = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), U * static_cast<Eigen::Index>(n));
  Exponent e(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (Eigen::Index u = 0; u < U; ++u) {
      for (const auto& [f, c] : forms[k].terms()) {
        for (std::size_t i = 0; i < n; ++i) e[i] = cols[static_cast<std::size_t>(u)][i] + f[i];
        a(row_of.at(e), static_cast<Eigen::Index>(k) * U + u) += c;
      }
    }
  }
  const auto solver = a.completeOrthogonalDecomposition();
  double cofactor_norm = 0.0, residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Exponent target(n, 0);
    target[j] = exponent;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(a.rows());
    rhs(row_of.at(target)) = 1.0;
    const Eigen::VectorXcd g = solver.solve(rhs);
    cofactor_norm = std::max(cofactor_norm, g.cwiseAbs().sum());
    residual = std::max(residual, (a * g - rhs).cwiseAbs().sum());
  }
  const double floor = std::pow(double(n), -0.5 * exponent);
  if (!(residual < 0.5 * floor) || !(cofactor_norm > 0.0)) return false;
  out = {exponent, cofactor_norm, residual, false};
  return true;
}

}  // namespace detail

class ComplexLiftMap {
 public:
  ComplexLiftMap() = default;

  /// A general complex lift. Distortion is certified numerically: a common
  /// zero on P^1 is rejected by the normalized resultant, and the lower
  /// bound comes from a least-squares Nullstellensatz identity.
  explicit ComplexLiftMap(std::vector<ComplexForm> forms, std::string name = {}, const LiftOptions& opts = {})
      : name_(std::move(name)), forms_(std::move(forms)) {
    check_map_shape(std::span<const ComplexForm>(forms_));
    degree_ = forms_[0].degree();
    if (degree_ < 2) throw DegreeTooSmall(degree_);
    for (const auto& f : forms_) {
      if (f.is_zero()) throw Degenerate("a component of the lift is the zero form");
    }
    if (forms_.size() == 2 &&
        detail::normalized_sylvester_determinant(forms_[0], forms_[1]) < opts.resultant_threshold)
      throw Degenerate("the lift components share a projective zero (resultant below threshold)");
    const unsigned cap = opts.certificate_cap ? opts.certificate_cap : default_certificate_cap(forms_.size(), degree_);
    bool found = false;
    for (unsigned m = degree_; m <= cap && !found; ++m)
      found = detail::numeric_certificate(std::span<const ComplexForm>(forms_), m, certificate_);
    if (!found) throw Degenerate("no numerical Nullstellensatz certificate up to exponent " + std::to_string(cap));
    finish();
  }

  /// The integer lift of a validated map times `scale`, certified exactly:
  /// e x_j^M = sum G_jk F_k becomes x_j^M = sum (G_jk / (e s)) (s F_k).
  static ComplexLiftMap from_checked(const CheckedMap& map, Complex scale = 1.0) {
    if (scale == Complex{}) throw NonzeroRequired();
    ComplexLiftMap out;
    out.name_ = map.name();
    out.degree_ = map.degree();
    for (const auto& f : map.forms()) {
      ComplexForm g(f.num_vars(), f.degree());
      for (const auto& [e, c] : f.terms()) g.add_term(e, scale * c.get_d());
      out.forms_.push_back(std::move(g));
    }
    const auto& cert = map.certificate();
    out.certificate_.exponent = cert.exponent;
    out.certificate_.cofactor_norm =
        certificate_minus_bound(cert).get_d() / (cert.denominator.get_d() * cert.denominator.get_d()) / std::abs(scale);
    out.certificate_.residual = 0.0;
    out.certificate_.exact = true;
    out.finish();
    return out;
  }

  /// The same map with every component multiplied by s.
  ComplexLiftMap scaled(Complex s) const {
    if (s == Complex{}) throw NonzeroRequired();
    ComplexLiftMap out = *this;
    for (auto& f : out.forms_) f = s * f;
    out.certificate_.cofactor_norm /= std::abs(s);
    out.finish();
    return out;
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<ComplexForm>& forms() const noexcept { return forms_; }
  unsigned degree() const noexcept { return degree_; }
  std::size_t dimension() const noexcept { return forms_.size() - 1; }
  const LiftCertificate& certificate() const noexcept { return certificate_; }
  double upper() const noexcept { return upper_; }
  double lower() const noexcept { return lower_; }
  double c_bar() const noexcept { return c_bar_; }
  double c_bound() const noexcept { return c_bar_; }

  std::vector<Complex> operator()(std::span<const Complex> x) const {
    if (x.size() != forms_.size()) throw DimensionMismatch("point and lift differ in dimension");
    const auto powers = ComplexForm::power_table(x, degree_);
    std::vector<Complex> out;
    out.reserve(forms_.size());
    for (const auto& f : forms_) out.push_back(f.evaluate_with(powers));
    return out;
  }

 private:
  void finish() {
    double s2 = 0.0;
    for (const auto& f : forms_) {
      const double s = detail::coefficient_norm1(f);
      s2 += s * s;
    }
    const double d = degree_;
    const double n = double(forms_.size());
    upper_ = 0.5 * std::log(s2) / d;
    const double floor = std::pow(n, -0.5 * certificate_.exponent) - certificate_.residual;
    lower_ = std::log(floor / certificate_.cofactor_norm) / d;
    c_bar_ = std::max(std::fabs(upper_), std::fabs(lower_));
  }

  std::string name_;
  std::vector<ComplexForm> forms_;
  unsigned degree_ = 0;
  LiftCertificate certificate_;
  double upper_ = 0.0, lower_ = 0.0, c_bar_ = 0.0;
};

using LiftSequence = SequenceSpec<ComplexLiftMap>;

/// Complex lifts of every generator of an exact sequence, with the same word.
inline LiftSequence lift_sequence(const MapSequence& spec) {
  std::vector<ComplexLiftMap> lifts;
  for (const auto& g : spec.generators()) lifts.push_back(ComplexLiftMap::from_checked(g));
  switch (spec.kind()) {
    case SequenceKind::Constant: return LiftSequence::constant(std::move(lifts), spec.tail()[0]);
    case SequenceKind::PeriodicWord: return LiftSequence::periodic(std::move(lifts), spec.tail());
    case SequenceKind::ExplicitWord: return LiftSequence::explicit_word(std::move(lifts), spec.prefix(), spec.tail());
    case SequenceKind::RandomWord: return LiftSequence::random(std::move(lifts), spec.seed(), spec.offset());
  }
  throw InputError("unknown sequence kind");
}

}  // namespace arithdyn

#endif  // ARITHDYN_LIFT_HPP
