// A short tour: canonical heights along a word of two quadratic maps, the
// points that are preperiodic for some word, and the matching Green function
// and backward-orbit statistics over C.

#include <array>
#include <cstdio>

#include "arithdyn/equidist.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/orbits.hpp"

using namespace arithdyn;

int main() {
  // x0^2 : x1^2 and x0^2 + x1^2 : x1^2, alternated.
  const std::vector<CheckedMap> gens{power_map(1, 2), perturbed_power_map(1, 2)};
  const auto word = MapSequence::periodic(gens, {0, 1});
  std::printf("c bound of the word: %.6f\n", word.c_bound());

  for (const auto& x : {ProjectivePoint::from_integers({1, 1}), ProjectivePoint::from_integers({2, 3})}) {
    const auto est = canonical_height(x, word, 1e-5);
    std::printf("h_hat%s = %.10f +- %.1e (depth %zu, naive %.6f)\n", x.to_string().c_str(), est.value, est.radius,
                est.depth, naive_height(x).value());
  }

  const auto census = preperiodic_census(gens);
  std::printf("%zu points in the Northcott set, %zu preperiodic for some word:", census.northcott_set.size(),
              census.preperiodic.size());
  for (const auto& e : census.preperiodic) std::printf(" %s", e.point.to_string().c_str());
  std::printf("\n");

  const auto lifts = lift_sequence(word);
  const std::array<Complex, 2> v{1.0, Complex{0.3, 0.4}};
  const auto g = green_function(lifts, std::span<const Complex>(v), 1e-10);
  std::printf("G(1, 0.3+0.4i) = %.10f +- %.1e\n", g.value, g.radius);

  const std::vector<std::size_t> depths{2, 6, 10};
  const std::vector<TestFunction> phis{TestFunction::height(), TestFunction::z2()};
  const auto report = equidistribution_report(lifts, CPoint::finite(2.0), depths, phis, 128);
  for (const auto& row : report.rows)
    std::printf("depth %2zu  %-3s  empirical %+.6f  current %+.6f  delta %.2e\n", row.depth, row.phi.c_str(),
                row.empirical, row.current, row.delta);
  return 0;
}
