#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "arithdyn/roots.hpp"

using namespace arithdyn;

namespace {

std::size_t total_multiplicity(const std::vector<WeightedPoint>& r) {
  std::size_t s = 0;
  for (const auto& p : r) s += p.multiplicity;
  return s;
}

// Coefficients of prod_k (x1 - r_k x0) in the x0^(d-k) x1^k basis.
std::vector<Complex> from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const auto& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return c;
}

bool has_root(const std::vector<WeightedPoint>& r, const CPoint& p, std::size_t mult, double tol) {
  return std::any_of(r.begin(), r.end(), [&](const WeightedPoint& w) {
    return w.multiplicity == mult && chordal_distance(w.point, p) < tol;
  });
}

}  // namespace

TEST(BinaryFormRoots, Examples) {
  const auto sq = binary_form_roots({-1.0, 0.0, 1.0});
  EXPECT_EQ(total_multiplicity(sq), 2u);
  EXPECT_TRUE(has_root(sq, CPoint::finite(1.0), 1, 1e-12));
  EXPECT_TRUE(has_root(sq, CPoint::finite(-1.0), 1, 1e-12));

  const auto inf = binary_form_roots({1.0, 0.0, 0.0});
  ASSERT_EQ(inf.size(), 1u);
  EXPECT_TRUE(inf[0].point.at_infinity);
  EXPECT_EQ(inf[0].multiplicity, 2u);

  const auto zero = binary_form_roots({0.0, 0.0, 1.0});
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].multiplicity, 2u);
  EXPECT_LT(std::abs(zero[0].point.z), 1e-6);
}

TEST(BinaryFormRoots, Errors) {
  EXPECT_THROW(binary_form_roots({1.0}), InputError);
  EXPECT_THROW(binary_form_roots({0.0, 0.0, 0.0}), InputError);
}

TEST(BinaryFormRoots, MultipleRootsCluster) {
  // A triple root spreads by about eps^(1/3) under rounding, so the
  // default cluster radius is too tight to merge it.
  RootOptions opts;
  opts.cluster_radius = 1e-4;
  const auto r = binary_form_roots(from_roots({1.0, 1.0, 1.0, -2.0}), opts);
  EXPECT_EQ(total_multiplicity(r), 4u);
  EXPECT_TRUE(has_root(r, CPoint::finite(1.0), 3, 1e-5));
  EXPECT_TRUE(has_root(r, CPoint::finite(-2.0), 1, 1e-10));
}

TEST(BinaryFormRoots, RandomPolynomialsRecoverRoots) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 2 + t % 14;
    std::vector<Complex> roots;
    for (std::size_t k = 0; k < d; ++k) roots.emplace_back(n(rng), n(rng));
    // Every fifth form drops its top coefficient, which puts a root at infinity.
    const bool drop = t % 5 == 0;
    if (drop) roots.pop_back();
    auto c = from_roots(roots);
    if (drop) c.push_back(0.0);
    const auto r = binary_form_roots(c);
    EXPECT_EQ(total_multiplicity(r), c.size() - 1);
    double norm1 = 0.0;
    for (auto v : c) norm1 += std::abs(v);
    for (const auto& w : r) EXPECT_LE(detail::binary_residual(c, w.point), 1e-10 * norm1);
    EXPECT_EQ(has_root(r, CPoint::infinity(), 1, 1e-12), drop);
  }
}

TEST(BinaryFormRoots, HighDegreeUnitCircle) {
  // z^64 = 2: sixty-four equally spaced roots on |z| = 2^(1/64).
  std::vector<Complex> c(65, 0.0);
  c[0] = -2.0;
  c[64] = 1.0;
  const auto r = binary_form_roots(c);
  ASSERT_EQ(r.size(), 64u);
  for (const auto& w : r) EXPECT_NEAR(std::abs(w.point.z), std::pow(2.0, 1.0 / 64.0), 1e-12);
}
