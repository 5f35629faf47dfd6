#ifndef ARITHDYN_AVERAGING_HPP
#define ARITHDYN_AVERAGING_HPP

// Height for the dynamical eigensystem (X; g_1, ..., g_k): at depth i it is
// sum over words w of length i of h_nv(g_w(x)) / (d_1 + ... + d_k)^i, and it
// equals the average of the word canonical heights under the product of the
// measures nu(j) = d_j / sum d.

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "arithdyn/heights.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

struct AveragingOptions {
  /// Cap on k^depth for the exact word recursion.
  double max_words = 59049.0;
  unsigned workers = 1;
  HeightOptions heights;
};

namespace detail {

inline unsigned degree_sum(std::span<const CheckedMap> gens) {
  unsigned s = 0;
  for (const auto& g : gens) s += g.degree();
  return s;
}

// S_r(p) = sum over words of length r of log H(g_w(p)), memoized on (p, r).
class WordLogSum {
 public:
  WordLogSum(std::span<const CheckedMap> gens, const HeightOptions& opts) : gens_(gens), opts_(opts) {}

  long double operator()(const ProjectivePoint& p, std::size_t r) {
    if (r == 0) return static_cast<long double>(log_abs(p.height()));
    const auto key = std::make_pair(p, r);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    long double s = 0.0L;
    for (const auto& g : gens_) {
      ProjectivePoint y = g(p);
      if (y.max_bits() > opts_.budget_bits) throw BudgetExceeded("eigensystem recursion", r);
      s += (*this)(y, r - 1);
    }
    memo_.emplace(key, s);
    return s;
  }

  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  std::span<const CheckedMap> gens_;
  const HeightOptions& opts_;
  std::map<std::pair<ProjectivePoint, std::size_t>, long double> memo_;
};

}  // namespace detail

/// Depth-i truncation of the eigensystem height by exact word recursion.
inline double eigensystem_height_exact(const ProjectivePoint& x, std::span<const CheckedMap> gens, std::size_t depth,
                                       const AveragingOptions& opts = {}) {
  if (gens.empty()) throw InputError("eigensystem_height_exact: no generators");
  if (std::pow(double(gens.size()), double(depth)) > opts.max_words)
    throw BudgetExceeded("k^depth exceeds the word budget", depth);
  detail::WordLogSum sums(gens, opts.heights);
  const long double total = std::pow(static_cast<long double>(detail::degree_sum(gens)), static_cast<long double>(depth));
  return static_cast<double>(sums(x, depth) / total);
}

struct McEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::size_t samples = 0;
};

/// h_i(x, w) = h_nv(g_{w_i} o ... o g_{w_1}(x)) / prod d_{w_a}.
inline double word_truncated_height(const ProjectivePoint& x, std::span<const CheckedMap> gens,
                                    std::span<const std::size_t> word, const HeightOptions& opts = {}) {
  ProjectivePoint y = x;
  Integer pi = 1;
  for (std::size_t a = 0; a < word.size(); ++a) {
    const auto& g = gens[word[a]];
    y = g(y);
    if (y.max_bits() > opts.budget_bits) throw BudgetExceeded("word orbit", a + 1);
    pi *= g.degree();
  }
  return log_abs(y.height()) / pi.get_d();
}

/// Mean of h_i(x, w) over `samples` words w drawn from the product measure.
/// Sample s uses the child seed derive_seed(seed, s), so the result does not
/// depend on the worker count.
inline McEstimate eigensystem_height_mc(const ProjectivePoint& x, std::span<const CheckedMap> gens,
                                        std::size_t samples, std::size_t depth, std::uint64_t seed,
                                        const AveragingOptions& opts = {}) {
  if (gens.empty()) throw InputError("eigensystem_height_mc: no generators");
  if (samples == 0) throw InputError("eigensystem_height_mc: need at least one sample");
  std::vector<unsigned> degrees;
  for (const auto& g : gens) degrees.push_back(g.degree());
  std::vector<double> values(samples);
  parallel_for(samples, opts.workers, [&](std::size_t s) {
    const auto word = sample_word(degrees, depth, derive_seed(seed, s));
    values[s] = word_truncated_height(x, gens, word, opts.heights);
  });
  long double sum = 0.0L;
  for (double v : values) sum += v;
  const long double mean = sum / static_cast<long double>(samples);
  long double ss = 0.0L;
  for (double v : values) ss += (v - mean) * (v - mean);
  McEstimate est;
  est.samples = samples;
  est.mean = static_cast<double>(mean);
  est.stderr = samples > 1 ? static_cast<double>(std::sqrt(ss / static_cast<long double>(samples - 1)) /
                                                 std::sqrt(static_cast<long double>(samples)))
                           : 0.0;
  return est;
}

struct AveragingReport {
  double exact_value = 0.0;
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  /// 2c / min over words of prod d: the tail bound shared by both sides.
  double truncation_radius = 0.0;
  std::size_t samples = 0;
  std::size_t depth = 0;
  double c_used = 0.0;
  double discrepancy = 0.0;
  double allowed = 0.0;
  bool pass = false;
};

/// Relative allowance for double rounding when both sides are otherwise exact.
inline constexpr double kAveragingRoundoff = 1e-12;

/// Compares the exact recursion and the Monte Carlo average. Passes when
/// |exact - mc| <= 3 stderr + 2 * truncation radius (+ float rounding).
inline AveragingReport verify_averaging(const ProjectivePoint& x, std::span<const CheckedMap> gens, std::size_t depth,
                                        std::size_t samples, std::uint64_t seed, const AveragingOptions& opts = {}) {
  AveragingReport r;
  r.depth = depth;
  r.samples = samples;
  r.exact_value = eigensystem_height_exact(x, gens, depth, opts);
  const auto mc = eigensystem_height_mc(x, gens, samples, depth, seed, opts);
  r.mc_value = mc.mean;
  r.mc_stderr = mc.stderr;
  unsigned dmin = gens[0].degree();
  for (const auto& g : gens) {
    r.c_used = std::max(r.c_used, g.c_bound());
    dmin = std::min(dmin, g.degree());
  }
  r.truncation_radius = 2.0 * r.c_used / std::pow(double(dmin), double(depth));
  r.discrepancy = std::fabs(r.exact_value - r.mc_value);
  r.allowed = 3.0 * r.mc_stderr + 2.0 * r.truncation_radius + kAveragingRoundoff * (1.0 + std::fabs(r.exact_value));
  r.pass = r.discrepancy <= r.allowed;
  return r;
}

}  // namespace arithdyn

#endif  // ARITHDYN_AVERAGING_HPP
