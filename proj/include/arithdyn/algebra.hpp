#ifndef ARITHDYN_ALGEBRA_HPP
#define ARITHDYN_ALGEBRA_HPP

// Exact arithmetic on P^N(Q): canonical projective points, homogeneous forms
// with integer (or other) coefficients, resultants of binary forms, and
// Nullstellensatz certificates  e * x_j^M = sum_k G_jk F_k.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"

namespace arithdyn {

using Integer = mpz_class;
using Rational = mpq_class;

/// Natural logarithm of |n| for n != 0, accurate for integers of any size.
inline double log_abs(const Integer& n) {
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53) return std::log(std::fabs(n.get_d()));
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, n.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

inline std::size_t bit_size(const Integer& n) {
  return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

/// A point of P^N(Q) stored as its canonical representative: coprime
/// integers whose first nonzero entry is positive.
class ProjectivePoint {
 public:
  /// Empty placeholder; every usable point comes from from_integers/normalize.
  ProjectivePoint() = default;

  /// Canonicalizes an integer vector. Throws AllZero.
  static ProjectivePoint from_integers(std::vector<Integer> coords) {
    Integer g = 0;
    for (const auto& c : coords) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0) throw AllZero();
    const auto first = std::find_if(coords.begin(), coords.end(), [](const Integer& c) { return c != 0; });
    if (*first < 0) g = -g;
    for (auto& c : coords) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return ProjectivePoint(std::move(coords));
  }

  static ProjectivePoint from_integers(std::initializer_list<long> coords) {
    std::vector<Integer> v;
    for (long c : coords) v.emplace_back(c);
    return from_integers(std::move(v));
  }

  std::size_t size() const noexcept { return coords_.size(); }
  /// N for a point of P^N.
  std::size_t dimension() const noexcept { return coords_.size() - 1; }
  const Integer& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Integer>& coords() const noexcept { return coords_; }

  /// max_i |x_i|; the multiplicative naive height of the point.
  Integer height() const {
    Integer h = 0;
    for (const auto& c : coords_) {
      if (mpz_cmpabs(c.get_mpz_t(), h.get_mpz_t()) > 0) h = abs(c);
    }
    return h;
  }

  std::size_t max_bits() const {
    std::size_t b = 0;
    for (const auto& c : coords_) b = std::max(b, bit_size(c));
    return b;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? " : " : "") << coords_[i].get_str();
    os << ')';
    return os.str();
  }

  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const ProjectivePoint& a, const ProjectivePoint& b) {
    if (a.coords_.size() != b.coords_.size()) return a.coords_.size() < b.coords_.size();
    for (std::size_t i = 0; i < a.coords_.size(); ++i) {
      const int c = cmp(a.coords_[i], b.coords_[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }

  struct Hash {
    std::size_t operator()(const ProjectivePoint& p) const noexcept {
      std::size_t h = 0x9e3779b97f4a7c15ULL;
      for (const auto& c : p.coords_) {
        const std::size_t limb = mpz_size(c.get_mpz_t()) ? mpz_getlimbn(c.get_mpz_t(), 0) : 0;
        h ^= limb + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(mpz_size(c.get_mpz_t())) * 31 + static_cast<std::size_t>(sgn(c) + 1);
      }
      return h;
    }
  };

 private:
  explicit ProjectivePoint(std::vector<Integer> coords) : coords_(std::move(coords)) {}
  std::vector<Integer> coords_;
};

/// Canonical coprime-integer representative of (r_0 : ... : r_N). Throws AllZero.
inline ProjectivePoint normalize(std::span<const Rational> raw) {
  Integer l = 1;
  for (const auto& r : raw) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den_mpz_t());
  std::vector<Integer> ints;
  ints.reserve(raw.size());
  for (const auto& r : raw) ints.emplace_back(r.get_num() * (l / r.get_den()));
  return ProjectivePoint::from_integers(std::move(ints));
}

inline ProjectivePoint normalize(const std::vector<Rational>& raw) {
  return normalize(std::span<const Rational>(raw));
}

using Exponent = std::vector<unsigned>;

/// All exponent vectors of total degree `degree` in `num_vars` variables,
/// in lexicographically decreasing order (x_0^d first).
inline std::vector<Exponent> monomials(std::size_t num_vars, unsigned degree) {
  std::vector<Exponent> out;
  if (num_vars == 0) return out;
  Exponent e(num_vars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == num_vars) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (unsigned k = left + 1; k-- > 0;) {
      e[i] = k;
      rec(i + 1, left - k);
    }
  };
  rec(0, degree);
  return out;
}

namespace detail {
template <class T>
inline bool is_zero(const T& v) {
  return v == T(0);
}
}  // namespace detail

/// A homogeneous polynomial in num_vars variables. Terms with zero
/// coefficient are never stored.
template <class Coeff>
class HomogeneousForm {
 public:
  using Terms = std::map<Exponent, Coeff, std::greater<Exponent>>;

  HomogeneousForm() = default;
  HomogeneousForm(std::size_t num_vars, unsigned degree) : num_vars_(num_vars), degree_(degree) {}

  HomogeneousForm(std::size_t num_vars, unsigned degree, std::initializer_list<std::pair<Exponent, Coeff>> terms)
      : num_vars_(num_vars), degree_(degree) {
    for (const auto& [e, c] : terms) add_term(e, c);
  }

  static HomogeneousForm monomial(std::size_t num_vars, const Exponent& e, const Coeff& c = Coeff(1)) {
    unsigned d = 0;
    for (unsigned k : e) d += k;
    HomogeneousForm f(num_vars, d);
    f.add_term(e, c);
    return f;
  }

  /// x_j^power.
  static HomogeneousForm variable_power(std::size_t num_vars, std::size_t j, unsigned power) {
    Exponent e(num_vars, 0);
    e[j] = power;
    return monomial(num_vars, e);
  }

  void add_term(const Exponent& e, const Coeff& c) {
    if (e.size() != num_vars_) throw DimensionMismatch("exponent length differs from number of variables");
    unsigned d = 0;
    for (unsigned k : e) d += k;
    if (d != degree_) throw DimensionMismatch("exponent sums to " + std::to_string(d) + ", form has degree " +
                                              std::to_string(degree_));
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  unsigned degree() const noexcept { return degree_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  Coeff coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  /// Evaluates at x using a precomputed table powers[i][k] = x_i^k.
  template <class T>
  T evaluate_with(const std::vector<std::vector<T>>& powers) const {
    T acc(0);
    for (const auto& [e, c] : terms_) {
      T term(c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i]) term *= powers[i][e[i]];
      }
      acc += term;
    }
    return acc;
  }

  template <class T>
  T operator()(std::span<const T> x) const {
    return evaluate_with(power_table(x, degree_));
  }

  template <class T>
  static std::vector<std::vector<T>> power_table(std::span<const T> x, unsigned degree) {
    std::vector<std::vector<T>> powers(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      powers[i].reserve(degree + 1);
      powers[i].push_back(T(1));
      for (unsigned k = 1; k <= degree; ++k) powers[i].push_back(powers[i].back() * x[i]);
    }
    return powers;
  }

  friend HomogeneousForm operator+(const HomogeneousForm& a, const HomogeneousForm& b) {
    check_compatible(a, b);
    HomogeneousForm out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }

  friend HomogeneousForm operator-(const HomogeneousForm& a, const HomogeneousForm& b) {
    check_compatible(a, b);
    HomogeneousForm out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, Coeff(-c));
    return out;
  }

  friend HomogeneousForm operator*(const HomogeneousForm& a, const HomogeneousForm& b) {
    if (a.num_vars_ != b.num_vars_) throw DimensionMismatch("forms in different numbers of variables");
    HomogeneousForm out(a.num_vars_, a.degree_ + b.degree_);
    Exponent e(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, Coeff(ca * cb));
      }
    }
    return out;
  }

  friend HomogeneousForm operator*(const Coeff& s, const HomogeneousForm& f) {
    HomogeneousForm out(f.num_vars_, f.degree_);
    for (const auto& [e, c] : f.terms_) out.add_term(e, Coeff(s * c));
    return out;
  }

  friend bool operator==(const HomogeneousForm& a, const HomogeneousForm& b) {
    return a.num_vars_ == b.num_vars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  static void check_compatible(const HomogeneousForm& a, const HomogeneousForm& b) {
    if (a.num_vars_ != b.num_vars_ || a.degree_ != b.degree_)
      throw DimensionMismatch("adding forms of different shape");
  }

  std::size_t num_vars_ = 0;
  unsigned degree_ = 0;
  Terms terms_;
};

using IntegerForm = HomogeneousForm<Integer>;

/// Checks that forms is a list of N+1 forms in N+1 variables of one degree.
template <class Coeff>
void check_map_shape(std::span<const HomogeneousForm<Coeff>> forms) {
  if (forms.empty()) throw DimensionMismatch("no forms given");
  const std::size_t n = forms.size();
  const unsigned d = forms[0].degree();
  for (const auto& f : forms) {
    if (f.num_vars() != n)
      throw DimensionMismatch("expected " + std::to_string(n) + " variables, form has " + std::to_string(f.num_vars()));
    if (f.degree() != d) throw DimensionMismatch("forms of unequal degree");
  }
}

/// Raw integer image vector (F_0(x), ..., F_N(x)) without renormalization.
inline std::vector<Integer> evaluate_raw(std::span<const IntegerForm> forms, std::span<const Integer> x) {
  if (forms.empty()) return {};
  unsigned d = forms[0].degree();
  const auto powers = IntegerForm::power_table<Integer>(x, d);
  std::vector<Integer> out;
  out.reserve(forms.size());
  for (const auto& f : forms) out.push_back(f.evaluate_with(powers));
  return out;
}

/// Exact image f(p) as a canonical point. Throws MapsToZero.
inline ProjectivePoint evaluate_forms(std::span<const IntegerForm> forms, const ProjectivePoint& p) {
  check_map_shape(forms);
  if (forms.size() != p.size()) throw DimensionMismatch("point and map live in different projective spaces");
  auto image = evaluate_raw(forms, std::span<const Integer>(p.coords()));
  if (std::all_of(image.begin(), image.end(), [](const Integer& c) { return c == 0; })) throw MapsToZero();
  return ProjectivePoint::from_integers(std::move(image));
}

inline ProjectivePoint evaluate_forms(const std::vector<IntegerForm>& forms, const ProjectivePoint& p) {
  return evaluate_forms(std::span<const IntegerForm>(forms), p);
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
inline Integer bareiss_determinant(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Coefficients of a binary form of degree d ordered by descending power of
/// x_0: c[k] multiplies x_0^(d-k) x_1^k.
template <class Coeff>
std::vector<Coeff> binary_coefficients(const HomogeneousForm<Coeff>& f) {
  if (f.num_vars() != 2) throw DimensionMismatch("binary form expected");
  const unsigned d = f.degree();
  std::vector<Coeff> c(d + 1, Coeff(0));
  for (const auto& [e, v] : f.terms()) c[e[1]] = v;
  return c;
}

/// Sylvester resultant of two binary forms of equal degree d (the formal
/// degree-d resultant, so a shared root at infinity also gives zero).
inline Integer resultant_p1(const IntegerForm& f0, const IntegerForm& f1) {
  if (f0.num_vars() != 2 || f1.num_vars() != 2) throw DimensionMismatch("resultant_p1 needs binary forms");
  if (f0.degree() != f1.degree()) throw DimensionMismatch("resultant_p1 needs forms of equal degree");
  const unsigned d = f0.degree();
  const auto a = binary_coefficients(f0);
  const auto b = binary_coefficients(f1);
  const std::size_t n = 2 * d;
  std::vector<std::vector<Integer>> s(n, std::vector<Integer>(n, 0));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k <= d; ++k) {
      s[r][r + k] = a[k];
      s[d + r][r + k] = b[k];
    }
  }
  return bareiss_determinant(std::move(s));
}

/// e * x_j^M = sum_k cofactors[j][k] * F_k for every j, with integer cofactors.
struct NullstellensatzCertificate {
  unsigned exponent = 0;
  Integer denominator = 1;
  std::vector<std::vector<IntegerForm>> cofactors;
};

/// Re-expands the identity coefficient by coefficient.
inline bool verify_certificate(std::span<const IntegerForm> forms, const NullstellensatzCertificate& cert) {
  const std::size_t n = forms.size();
  if (cert.cofactors.size() != n) return false;
  for (std::size_t j = 0; j < n; ++j) {
    if (cert.cofactors[j].size() != n) return false;
    IntegerForm lhs = cert.denominator * IntegerForm::variable_power(n, j, cert.exponent);
    IntegerForm rhs(n, cert.exponent);
    for (std::size_t k = 0; k < n; ++k) rhs = rhs + cert.cofactors[j][k] * forms[k];
    if (!(lhs == rhs)) return false;
  }
  return true;
}

/// Default search cap (N+1)(d-1)+1, which is 2d-1 on P^1.
inline unsigned default_certificate_cap(std::size_t num_vars, unsigned degree) {
  return static_cast<unsigned>(num_vars) * (degree - 1) + 1;
}

namespace detail {

struct EchelonSolve {
  bool consistent = false;
  std::vector<std::vector<Rational>> solutions;  // one per right-hand side
};

// Solves A x = b_r for each right-hand side column, with free variables set
// to zero. Forward elimination is fraction-free; back-substitution is over Q.
inline EchelonSolve solve_integer_system(std::vector<std::vector<Integer>> rows, std::size_t unknowns,
                                         std::size_t rhs_count) {
  const std::size_t m = rows.size();
  const std::size_t width = unknowns + rhs_count;
  std::vector<std::size_t> pivot_cols;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < m; ++c) {
    std::size_t p = r;
    while (p < m && rows[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(rows[r], rows[p]);
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < width; ++j) {
        Integer t = rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j];
        mpz_divexact(rows[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      rows[i][c] = 0;
    }
    prev = rows[r][c];
    pivot_cols.push_back(c);
    ++r;
  }
  EchelonSolve out;
  for (std::size_t i = r; i < m; ++i) {
    for (std::size_t j = unknowns; j < width; ++j) {
      if (rows[i][j] != 0) return out;
    }
  }
  out.consistent = true;
  out.solutions.assign(rhs_count, std::vector<Rational>(unknowns, Rational(0)));
  for (std::size_t s = 0; s < rhs_count; ++s) {
    auto& x = out.solutions[s];
    for (std::size_t k = pivot_cols.size(); k-- > 0;) {
      const std::size_t c = pivot_cols[k];
      Rational acc(rows[k][unknowns + s]);
      for (std::size_t j = c + 1; j < unknowns; ++j) {
        if (rows[k][j] != 0 && x[j] != 0) acc -= Rational(rows[k][j]) * x[j];
      }
      acc /= Rational(rows[k][c]);
      acc.canonicalize();
      x[c] = acc;
    }
  }
  return out;
}

}  // namespace detail

/// Exact search for a certificate at a fixed exponent M >= d. Throws
/// NotFound(M) if some x_j^M is not in the ideal of the forms in degree M,
/// and Degenerate on P^1 when the resultant vanishes.
inline NullstellensatzCertificate find_certificate(std::span<const IntegerForm> forms, unsigned exponent);

namespace detail {

// The linear solve alone, without the resultant screen.
inline NullstellensatzCertificate solve_certificate(std::span<const IntegerForm> forms, unsigned exponent) {
  check_map_shape(forms);
  const std::size_t n = forms.size();
  const unsigned d = forms[0].degree();
  if (exponent < d) throw NotFound(exponent);

  const auto cofactor_monos = monomials(n, exponent - d);
  const auto target_monos = monomials(n, exponent);
  std::map<Exponent, std::size_t, std::greater<Exponent>> row_of;
  for (std::size_t i = 0; i < target_monos.size(); ++i) row_of[target_monos[i]] = i;

  const std::size_t unknowns = n * cofactor_monos.size();
  std::vector<std::vector<Integer>> rows(target_monos.size(), std::vector<Integer>(unknowns + n, 0));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t u = 0; u < cofactor_monos.size(); ++u) {
      const std::size_t col = k * cofactor_monos.size() + u;
      const auto& mu = cofactor_monos[u];
      for (const auto& [e, c] : forms[k].terms()) {
        Exponent sum(n);
        for (std::size_t i = 0; i < n; ++i) sum[i] = e[i] + mu[i];
        rows[row_of.at(sum)][col] += c;
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    Exponent e(n, 0);
    e[j] = exponent;
    rows[row_of.at(e)][unknowns + j] = 1;
  }

  auto solved = solve_integer_system(std::move(rows), unknowns, n);
  if (!solved.consistent) throw NotFound(exponent);

  Integer e = 1;
  for (const auto& sol : solved.solutions) {
    for (const auto& q : sol) mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), q.get_den_mpz_t());
  }
  NullstellensatzCertificate cert;
  cert.exponent = exponent;
  cert.denominator = e;
  cert.cofactors.assign(n, std::vector<IntegerForm>(n, IntegerForm(n, exponent - d)));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t u = 0; u < cofactor_monos.size(); ++u) {
        const Rational& q = solved.solutions[j][k * cofactor_monos.size() + u];
        if (q == 0) continue;
        cert.cofactors[j][k].add_term(cofactor_monos[u], Integer(q.get_num() * (e / q.get_den())));
      }
    }
  }
  return cert;
}

}  // namespace detail

inline NullstellensatzCertificate find_certificate(std::span<const IntegerForm> forms, unsigned exponent) {
  check_map_shape(forms);
  if (exponent < forms[0].degree()) throw NotFound(exponent);
  if (forms.size() == 2 && resultant_p1(forms[0], forms[1]) == 0)
    throw Degenerate("forms share a projective zero (resultant is 0)");
  return detail::solve_certificate(forms, exponent);
}

inline NullstellensatzCertificate find_certificate(const std::vector<IntegerForm>& forms, unsigned exponent) {
  return find_certificate(std::span<const IntegerForm>(forms), exponent);
}

/// Ascends M = d, d+1, ..., cap and returns the first certificate. Past the
/// Macaulay bound a missing certificate means a common zero, so exhaustion
/// is reported as Degenerate.
inline NullstellensatzCertificate find_certificate_ascending(std::span<const IntegerForm> forms, unsigned cap = 0) {
  check_map_shape(forms);
  const unsigned d = forms[0].degree();
  if (cap == 0) cap = default_certificate_cap(forms.size(), d);
  for (unsigned m = d; m <= std::max(cap, d); ++m) {
    try {
      return find_certificate(forms, m);
    } catch (const NotFound&) {
    }
  }
  throw Degenerate("no Nullstellensatz certificate with exponent <= " + std::to_string(std::max(cap, d)) +
                   "; the forms share a projective zero");
}

}  // namespace arithdyn

#endif  // ARITHDYN_ALGEBRA_HPP
