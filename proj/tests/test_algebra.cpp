#include <gtest/gtest.h>

#include <random>

#include "arithdyn/algebra.hpp"
#include "support.hpp"

using namespace arithdyn;
using namespace testing_support;

namespace {

// Leibniz expansion, independent of the Bareiss elimination under test.
Integer leibniz_determinant(const std::vector<std::vector<Integer>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Integer total = 0;
  do {
    Integer term = 1;
    for (std::size_t i = 0; i < n; ++i) term *= a[i][perm[i]];
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    total += (inversions % 2 ? -term : term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Integer sylvester_by_leibniz(const IntegerForm& f0, const IntegerForm& f1) {
  const unsigned d = f0.degree();
  const auto a = binary_coefficients(f0);
  const auto b = binary_coefficients(f1);
  std::vector<std::vector<Integer>> s(2 * d, std::vector<Integer>(2 * d, 0));
  for (unsigned r = 0; r < d; ++r)
    for (unsigned k = 0; k <= d; ++k) {
      s[r][r + k] = a[k];
      s[d + r][r + k] = b[k];
    }
  return leibniz_determinant(s);
}

}  // namespace

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(std::vector<Rational>{Rational(2, 3), Rational(4, 3)}), ProjectivePoint::from_integers({1, 2}));
  EXPECT_EQ(normalize(std::vector<Rational>{Rational(0), Rational(5)}), ProjectivePoint::from_integers({0, 1}));
  EXPECT_EQ(normalize(std::vector<Rational>{Rational(-2), Rational(-6)}), ProjectivePoint::from_integers({1, 3}));
  EXPECT_THROW(normalize(std::vector<Rational>{Rational(0), Rational(0)}), AllZero);
}

TEST(Normalize, IdempotentAndScaleInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coord(-50, 50), scale(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rational> raw{Rational(coord(rng)), Rational(coord(rng)), Rational(coord(rng))};
    if (raw[0] == 0 && raw[1] == 0 && raw[2] == 0) continue;
    const auto p = normalize(raw);
    std::vector<Rational> again;
    for (const auto& c : p.coords()) again.emplace_back(c);
    EXPECT_EQ(normalize(again), p);
    Rational lambda(scale(rng) * (trial % 2 ? -1 : 1), scale(rng));
    lambda.canonicalize();
    std::vector<Rational> scaled;
    for (const auto& r : raw) scaled.push_back(r * lambda);
    EXPECT_EQ(normalize(scaled), p);
  }
}

TEST(ProjectivePoint, CanonicalInvariants) {
  const auto p = ProjectivePoint::from_integers({-4, 6});
  EXPECT_EQ(p, ProjectivePoint::from_integers({2, -3}));
  EXPECT_EQ(p.height(), 3);
  EXPECT_EQ(p.to_string(), "(2 : -3)");
  EXPECT_THROW(ProjectivePoint::from_integers({0, 0}), AllZero);
}

TEST(HomogeneousForm, RejectsInhomogeneousTerms) {
  IntegerForm f(2, 2);
  EXPECT_THROW(f.add_term({1, 0}, Integer(1)), DimensionMismatch);
  EXPECT_THROW(f.add_term({1, 1, 0}, Integer(1)), DimensionMismatch);
  f.add_term({1, 1}, Integer(3));
  f.add_term({1, 1}, Integer(-3));
  EXPECT_TRUE(f.is_zero());
}

TEST(HomogeneousForm, Arithmetic) {
  const auto x0 = IntegerForm::variable_power(2, 0, 1);
  const auto x1 = IntegerForm::variable_power(2, 1, 1);
  const auto sq = (x0 + x1) * (x0 - x1);
  EXPECT_EQ(sq, binary({1, 0, -1}));
  EXPECT_EQ(monomials(3, 2).size(), 6u);
}

TEST(EvaluateForms, Examples) {
  const std::vector<IntegerForm> g1{binary({1, 0, 0}), binary({0, 0, 1})};
  const std::vector<IntegerForm> g2{binary({1, 0, 1}), binary({0, 0, 1})};
  EXPECT_EQ(evaluate_forms(g1, ProjectivePoint::from_integers({2, 3})), ProjectivePoint::from_integers({4, 9}));
  EXPECT_EQ(evaluate_forms(g2, ProjectivePoint::from_integers({1, 1})), ProjectivePoint::from_integers({2, 1}));
  EXPECT_EQ(evaluate_forms(g2, ProjectivePoint::from_integers({1, 0})), ProjectivePoint::from_integers({1, 0}));
  const std::vector<IntegerForm> bad{binary({0, 1, 0}), binary({0, 0, 1})};
  EXPECT_THROW(evaluate_forms(bad, ProjectivePoint::from_integers({1, 0})), MapsToZero);
}

TEST(EvaluateForms, ProjectivelyWellDefined) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> c(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<IntegerForm> f{binary({c(rng), c(rng), c(rng)}), binary({c(rng), c(rng), c(rng)})};
    if (f[0].is_zero() || f[1].is_zero() || resultant_p1(f[0], f[1]) == 0) continue;
    const long a = c(rng), b = c(rng);
    if (a == 0 && b == 0) continue;
    const long lambda = 1 + trial % 7;
    const auto p = ProjectivePoint::from_integers({a, b});
    const auto q = normalize(std::vector<Rational>{Rational(a * lambda, 3), Rational(b * lambda, 3)});
    EXPECT_EQ(evaluate_forms(f, p), evaluate_forms(f, q));
  }
}

TEST(Resultant, Examples) {
  EXPECT_EQ(resultant_p1(binary({1, 0, 0}), binary({0, 0, 1})), 1);
  EXPECT_EQ(resultant_p1(binary({0, 1, 0}), binary({0, 0, 1})), 0);
  EXPECT_EQ(resultant_p1(binary({1, 0, 1}), binary({0, 0, 1})), 1);
  EXPECT_THROW(resultant_p1(binary({1, 0}), binary({0, 0, 1})), DimensionMismatch);
}

TEST(Resultant, MatchesLeibnizOracle) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> c(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned d = 1 + trial % 4;
    IntegerForm f0(2, d), f1(2, d);
    for (unsigned k = 0; k <= d; ++k) {
      f0.add_term({d - k, k}, Integer(c(rng)));
      f1.add_term({d - k, k}, Integer(c(rng)));
    }
    EXPECT_EQ(resultant_p1(f0, f1), sylvester_by_leibniz(f0, f1));
  }
}

TEST(Certificate, Examples) {
  const std::vector<IntegerForm> g1{binary({1, 0, 0}), binary({0, 0, 1})};
  const auto c1 = find_certificate(g1, 2);
  EXPECT_EQ(c1.exponent, 2u);
  EXPECT_EQ(c1.denominator, 1);
  EXPECT_TRUE(verify_certificate(g1, c1));

  const std::vector<IntegerForm> g2{binary({1, 0, 1}), binary({0, 0, 1})};
  const auto c2 = find_certificate(g2, 2);
  EXPECT_EQ(c2.denominator, 1);
  EXPECT_EQ(c2.cofactors[0][0], IntegerForm(2, 0, {{{0, 0}, Integer(1)}}));
  EXPECT_EQ(c2.cofactors[0][1], IntegerForm(2, 0, {{{0, 0}, Integer(-1)}}));
  EXPECT_TRUE(verify_certificate(g2, c2));

  // (x0^2 + x1^2 : 2 x1^2): x0^2 = F0 - F1/2 and x1^2 = F1/2, so e = 2.
  const std::vector<IntegerForm> g3{binary({1, 0, 1}), binary({0, 0, 2})};
  const auto c3 = find_certificate(g3, 2);
  EXPECT_EQ(c3.denominator, 2);
  EXPECT_TRUE(verify_certificate(g3, c3));
}

TEST(Certificate, NotFoundBelowDegreeAndDegenerateOnCommonZero) {
  const std::vector<IntegerForm> g{binary({1, 0, 1}), binary({0, 0, 1})};
  EXPECT_THROW(find_certificate(g, 1), NotFound);
  const std::vector<IntegerForm> bad{binary({0, 1, 0}), binary({0, 0, 1})};
  EXPECT_THROW(find_certificate_ascending(bad), Degenerate);
}

TEST(Certificate, HigherExponentNeeded) {
  // x0^2 + x0 x1 and x1^2: x0^2 alone is not in the span at M = 2.
  const std::vector<IntegerForm> f{binary({1, 1, 0}), binary({0, 0, 1})};
  EXPECT_THROW(find_certificate(f, 2), NotFound);
  const auto cert = find_certificate_ascending(f);
  EXPECT_EQ(cert.exponent, 3u);
  EXPECT_TRUE(verify_certificate(f, cert));
}

TEST(Certificate, ResultantZeroIffNoCertificate) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> c(-2, 2);
  int degenerate = 0, regular = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const unsigned d = 1 + trial % 4;
    IntegerForm f0(2, d), f1(2, d);
    for (unsigned k = 0; k <= d; ++k) {
      f0.add_term({d - k, k}, Integer(c(rng)));
      f1.add_term({d - k, k}, Integer(c(rng)));
    }
    if (f0.is_zero() || f1.is_zero()) continue;
    const std::vector<IntegerForm> f{f0, f1};
    bool found = false;
    for (unsigned m = d; m <= 2 * d - 1 && !found; ++m) {
      try {
        const auto cert = detail::solve_certificate(f, m);
        EXPECT_TRUE(verify_certificate(f, cert));
        found = true;
      } catch (const NotFound&) {
      }
    }
    const bool zero = resultant_p1(f0, f1) == 0;
    EXPECT_EQ(found, !zero) << "degree " << d;
    (zero ? degenerate : regular)++;
  }
  EXPECT_GT(degenerate, 5);
  EXPECT_GT(regular, 5);
}

TEST(Certificate, ThreeVariables) {
  std::vector<IntegerForm> f;
  for (std::size_t j = 0; j < 3; ++j) f.push_back(IntegerForm::variable_power(3, j, 2));
  f[0] = f[0] + IntegerForm::variable_power(3, 2, 2);
  const auto cert = find_certificate_ascending(f);
  EXPECT_TRUE(verify_certificate(f, cert));
  EXPECT_EQ(cert.exponent, 2u);
}
