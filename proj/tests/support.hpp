#ifndef ARITHDYN_TESTS_SUPPORT_HPP
#define ARITHDYN_TESTS_SUPPORT_HPP

#include <initializer_list>
#include <random>
#include <vector>

#include "arithdyn/algebra.hpp"

namespace testing_support {

using arithdyn::Integer;
using arithdyn::IntegerForm;
using arithdyn::ProjectivePoint;

/// sum_k c_k x0^(d-k) x1^k.
inline IntegerForm binary(std::initializer_list<long> coeffs) {
  const unsigned d = static_cast<unsigned>(coeffs.size()) - 1;
  IntegerForm f(2, d);
  unsigned k = 0;
  for (long c : coeffs) {
    f.add_term({d - k, k}, Integer(c));
    ++k;
  }
  return f;
}

inline ProjectivePoint random_point(std::mt19937_64& rng, std::size_t n, long bound) {
  std::uniform_int_distribution<long> c(-bound, bound);
  for (;;) {
    std::vector<Integer> coords;
    bool nonzero = false;
    for (std::size_t j = 0; j <= n; ++j) {
      coords.emplace_back(c(rng));
      nonzero = nonzero || coords.back() != 0;
    }
    if (nonzero) return ProjectivePoint::from_integers(std::move(coords));
  }
}

}  // namespace testing_support

#endif  // ARITHDYN_TESTS_SUPPORT_HPP
