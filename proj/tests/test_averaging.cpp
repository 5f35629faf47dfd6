#include <gtest/gtest.h>

#include <cmath>

#include "arithdyn/averaging.hpp"

using namespace arithdyn;

namespace {

ProjectivePoint P(long a, long b) { return ProjectivePoint::from_integers({a, b}); }

std::vector<CheckedMap> mixed() { return {power_map(1, 2), perturbed_power_map(1, 2)}; }

// Depth-i values of sum_w log H(g_w(x)) / 4^i for {g'_2, g''_2}, frozen from
// an independent Python big-integer expansion over all 2^i words.
constexpr double kV11_1 = 0.17328679513998633;
constexpr double kV11_2 = 0.23055496588212102;
constexpr double kV11_8 = 0.25177365040860772;
constexpr double kV23_8 = 1.2478068125515888;

}  // namespace

TEST(EigensystemExact, FrozenValues) {
  const auto gens = mixed();
  EXPECT_NEAR(eigensystem_height_exact(P(1, 1), gens, 1), kV11_1, 1e-15);
  EXPECT_NEAR(eigensystem_height_exact(P(1, 1), gens, 2), kV11_2, 1e-15);
  EXPECT_NEAR(eigensystem_height_exact(P(1, 1), gens, 8), kV11_8, 1e-14);
  EXPECT_NEAR(eigensystem_height_exact(P(2, 3), gens, 8), kV23_8, 1e-14);
}

TEST(EigensystemExact, Examples) {
  const std::vector<CheckedMap> powers{power_map(1, 2), power_map(1, 3)};
  for (std::size_t i : {0u, 1u, 4u, 9u}) EXPECT_NEAR(eigensystem_height_exact(P(2, 3), powers, i), std::log(3.0), 1e-14);
  for (std::size_t i : {0u, 3u, 8u}) EXPECT_EQ(eigensystem_height_exact(P(1, 0), mixed(), i), 0.0);
}

TEST(EigensystemExact, WordBudget) {
  AveragingOptions opts;
  opts.max_words = 100;
  EXPECT_THROW(eigensystem_height_exact(P(1, 1), mixed(), 7, opts), BudgetExceeded);
  EXPECT_NO_THROW(eigensystem_height_exact(P(1, 1), mixed(), 6, opts));
}

// sum_j v_i(g_j(x)) = (sum_j d_j) v_{i+1}(x), the finite-depth telescoping step.
TEST(EigensystemExact, TelescopingIdentity) {
  const std::vector<std::vector<CheckedMap>> families{mixed(), {power_map(1, 2), power_map(1, 3)},
                                                      {perturbed_power_map(1, 2), perturbed_power_map(1, 3)}};
  for (const auto& gens : families) {
    const double dsum = detail::degree_sum(gens);
    for (const auto& x : {P(1, 1), P(2, 3), P(-3, 7)}) {
      for (std::size_t i = 0; i < 6; ++i) {
        double lhs = 0.0;
        for (const auto& g : gens) lhs += eigensystem_height_exact(g(x), gens, i);
        const double rhs = dsum * eigensystem_height_exact(x, gens, i + 1);
        EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::fabs(rhs)));
      }
    }
  }
}

TEST(EigensystemMc, PointMassAndTelescopingWords) {
  const std::vector<CheckedMap> one{perturbed_power_map(1, 2)};
  const auto a = eigensystem_height_mc(P(1, 1), one, 50, 8, 3);
  EXPECT_EQ(a.stderr, 0.0);
  EXPECT_NEAR(a.mean, height_sequence(P(1, 1), MapSequence::constant(one[0]), 8).back().value(), 1e-15);

  const std::vector<CheckedMap> powers{power_map(1, 2), power_map(1, 3)};
  const auto b = eigensystem_height_mc(P(2, 3), powers, 200, 6, 9);
  EXPECT_NEAR(b.mean, std::log(3.0), 1e-14);
  EXPECT_LE(b.stderr, 1e-14);
}

TEST(EigensystemMc, IndependentOfWorkerCount) {
  AveragingOptions one, four;
  four.workers = 4;
  const auto a = eigensystem_height_mc(P(1, 1), mixed(), 2000, 8, 77, one);
  const auto b = eigensystem_height_mc(P(1, 1), mixed(), 2000, 8, 77, four);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr, b.stderr);
}

TEST(VerifyAveraging, Examples) {
  const std::vector<CheckedMap> g2{power_map(1, 2)};
  const auto a = verify_averaging(P(5, 7), g2, 6, 100, 1);
  EXPECT_TRUE(a.pass);
  EXPECT_EQ(a.discrepancy, 0.0);

  const std::vector<CheckedMap> powers{power_map(1, 2), power_map(1, 3)};
  const auto b = verify_averaging(P(2, 3), powers, 6, 500, 2);
  EXPECT_TRUE(b.pass);
  EXPECT_NEAR(b.exact_value, std::log(3.0), 1e-14);
  EXPECT_NEAR(b.mc_value, std::log(3.0), 1e-14);

  const auto c = verify_averaging(P(1, 1), mixed(), 8, 10000, 1);
  EXPECT_TRUE(c.pass) << c.discrepancy << " > " << c.allowed;
  EXPECT_NEAR(c.truncation_radius, 2.0 * (std::log(2.0) / 2.0) / 256.0, 1e-15);
}

// Unbiasedness: |z| <= 4 for at least 19 of 20 seeds.
TEST(EigensystemMc, ZScoresAcrossSeeds) {
  const auto gens = mixed();
  const double exact = eigensystem_height_exact(P(1, 1), gens, 8);
  int ok = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    const auto mc = eigensystem_height_mc(P(1, 1), gens, 2000, 8, seed);
    ASSERT_GT(mc.stderr, 0.0);
    ok += std::fabs((mc.mean - exact) / mc.stderr) <= 4.0;
  }
  EXPECT_GE(ok, 19);
}
