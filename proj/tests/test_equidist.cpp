#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "arithdyn/equidist.hpp"

using namespace arithdyn;

namespace {

ComplexLiftMap lift(const CheckedMap& g) { return ComplexLiftMap::from_checked(g); }

LiftSequence squaring() { return lift_sequence(MapSequence::constant(power_map(1, 2))); }
LiftSequence mixed() {
  return lift_sequence(MapSequence::periodic({power_map(1, 2), perturbed_power_map(1, 2)}, {0, 1}));
}

}  // namespace

TEST(Preimages, Examples) {
  const auto a = preimages_one_step(lift(power_map(1, 2)), CPoint::finite(1.0));
  ASSERT_EQ(a.size(), 2u);
  double prod = 1.0;
  for (const auto& p : a) {
    EXPECT_EQ(p.multiplicity, 1u);
    EXPECT_NEAR(std::abs(p.point.z), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(p.point.z.imag()), 0.0, 1e-14);
    prod *= p.point.z.real();
  }
  EXPECT_NEAR(prod, -1.0, 1e-14);

  const auto b = preimages_one_step(lift(power_map(1, 2)), CPoint::infinity());
  ASSERT_EQ(b.size(), 1u);
  EXPECT_TRUE(b[0].point.at_infinity);
  EXPECT_EQ(b[0].multiplicity, 2u);

  const auto c = preimages_one_step(lift(perturbed_power_map(1, 2)), CPoint::finite(1.0));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(c[0].point.at_infinity);
  EXPECT_EQ(c[0].multiplicity, 2u);
}

TEST(Preimages, UnsupportedDimension) {
  EXPECT_THROW(preimages_one_step(lift(power_map(2, 2)), CPoint::finite(1.0)), UnsupportedDimension);
}

TEST(PreimageCloud, DepthZeroAndRootsOfTwo) {
  const auto zero = preimage_cloud(squaring(), CPoint::finite(2.0), 0);
  ASSERT_EQ(zero.points.size(), 1u);
  EXPECT_EQ(zero.points[0].point.z, Complex(2.0));

  const auto c = preimage_cloud(squaring(), CPoint::finite(2.0), 3);
  EXPECT_EQ(c.total, 8u);
  EXPECT_EQ(c.count(), 8u);
  ASSERT_EQ(c.points.size(), 8u);
  for (const auto& p : c.points) {
    EXPECT_NEAR(std::abs(std::pow(p.point.z, 8) - 2.0), 0.0, 1e-13);
  }
  // Eight distinct roots, one per octant.
  std::vector<int> octant(8, 0);
  for (const auto& p : c.points) {
    const double t = std::arg(p.point.z / std::pow(2.0, 1.0 / 8.0));
    octant[std::size_t(std::lround((t < -1e-9 ? t + 2.0 * std::numbers::pi : t) / (std::numbers::pi / 4.0))) % 8]++;
  }
  for (int k : octant) EXPECT_EQ(k, 1);
}

TEST(PreimageCloud, MixedWordOrderAndRoundTrip) {
  const auto f = mixed();
  const auto c = preimage_cloud(f, CPoint::finite(2.0), 2);
  EXPECT_EQ(c.count(), 4u);
  EXPECT_LE(round_trip_error(f, c), 1e-8);
  // f_1 is g'_2 and f_2 is g''_2: solving in the wrong order would give
  // points y with g''_2(g'_2(y)) != 2.
  for (const auto& p : c.points) {
    const auto y = apply_lift(f.at(1), apply_lift(f.at(0), p.point));
    EXPECT_LT(chordal_distance(y, CPoint::finite(2.0)), 1e-8);
  }
}

TEST(PreimageCloud, ConservationAndRoundTripAcrossWords) {
  const std::vector<ComplexLiftMap> gens{lift(power_map(1, 2)), lift(perturbed_power_map(1, 2)),
                                         lift(perturbed_power_map(1, 3))};
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto f = LiftSequence::random(gens, seed);
    const auto c = preimage_cloud(f, CPoint::finite(Complex{0.3, -1.1}), 6);
    EXPECT_EQ(c.count(), c.total);
    EXPECT_LE(round_trip_error(f, c), 1e-6);
    EXPECT_NEAR(empirical_pairing(c, TestFunction::one()), 1.0, 1e-14);
  }
}

TEST(PreimageCloud, Budget) {
  CloudOptions opts;
  opts.budget = 64;
  EXPECT_THROW(preimage_cloud(squaring(), CPoint::finite(2.0), 7, opts), BudgetExceeded);
  EXPECT_NO_THROW(preimage_cloud(squaring(), CPoint::finite(2.0), 6, opts));
}

TEST(PreimageCloud, IndependentOfWorkerCount) {
  CloudOptions one, four;
  four.workers = 4;
  const auto a = preimage_cloud(mixed(), CPoint::finite(2.0), 8, one);
  const auto b = preimage_cloud(mixed(), CPoint::finite(2.0), 8, four);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].point.z, b.points[i].point.z);
    EXPECT_EQ(a.points[i].multiplicity, b.points[i].multiplicity);
  }
}

// An exactly computable rational preimage: under g'_2, 4 = f(2), so the
// depth-1 preimages of a = 4 include 2 and canonical heights scale by 1/d.
TEST(PreimageCloud, ArithmeticHeightOfPreimages) {
  const auto spec = MapSequence::constant(power_map(1, 2));
  const auto c = preimage_cloud(lift_sequence(spec), CPoint::finite(16.0), 2);
  const auto ha = canonical_height(ProjectivePoint::from_integers({1, 16}), spec, 1e-9);
  int rational = 0;
  for (const auto& p : c.points) {
    const double re = std::round(p.point.z.real());
    if (std::fabs(p.point.z.imag()) > 1e-9 || std::fabs(p.point.z.real() - re) > 1e-9) continue;
    const auto y = ProjectivePoint::from_integers({1, static_cast<long>(re)});
    const auto hy = canonical_height(y, spec, 1e-9);
    EXPECT_NEAR(hy.value, ha.value / 4.0, hy.radius + ha.radius / 4.0 + 1e-15);
    ++rational;
  }
  EXPECT_EQ(rational, 2);
}

TEST(EquidistReport, PowerMapReFunction) {
  const std::vector<std::size_t> depths{2, 6, 8, 10};
  const std::vector<TestFunction> phis{TestFunction::re(), TestFunction::one(), TestFunction::height()};
  const auto r = equidistribution_report(squaring(), CPoint::finite(2.0), depths, phis, 128);
  for (std::size_t j : {6u, 8u, 10u}) EXPECT_LE(r.delta(j, "re"), 0.1);
  EXPECT_NEAR(r.delta(10, "one"), r.delta(2, "one"), 1e-12);
  EXPECT_LT(r.delta(10, "z"), r.delta(2, "z"));
  for (const auto& t : r.trends) EXPECT_TRUE(t.holds) << t.phi;
  EXPECT_THROW(r.delta(3, "re"), InputError);
}

TEST(EquidistReport, ZonalSignalDecreasesForMixedWord) {
  const std::vector<std::size_t> depths{2, 4, 6, 8};
  const std::vector<TestFunction> phis{TestFunction::height(), TestFunction::z2(), TestFunction::x2y2()};
  const auto r = equidistribution_report(mixed(), CPoint::finite(2.0), depths, phis, 128);
  // The preimages of a real point come in conjugate pairs and in pairs
  // z, -z, so x2y2 pairs to zero on both sides and only rounding is left.
  for (const auto& t : r.trends) {
    EXPECT_TRUE(t.holds) << t.phi;
    if (t.phi == "x2y2") {
      EXPECT_FALSE(t.resolved);
      EXPECT_LE(r.delta(8, t.phi), 1e-12);
    } else {
      EXPECT_TRUE(t.resolved) << t.phi;
      EXPECT_TRUE(t.decreased) << t.phi;
    }
  }
}
