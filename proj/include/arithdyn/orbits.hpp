#ifndef ARITHDYN_ORBITS_HPP
#define ARITHDYN_ORBITS_HPP

// Forward orbits, the Northcott set T = { y : h(y) <= 2c } of a generator
// family, the census of points that are preperiodic for some word, and the
// unbounded-sequence construction where no canonical height can exist.

#include <algorithm>
#include <deque>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "arithdyn/heights.hpp"
#include "arithdyn/parallel.hpp"

namespace arithdyn {

/// Exact membership test for T. With c = max_g log(K_g) / d_g, where
/// K_g = max(plus_bound, minus_bound):  log H <= 2c  iff  H^{d_g} <= K_g^2
/// for some generator g.
class NorthcottSet {
 public:
  explicit NorthcottSet(std::span<const CheckedMap> gens) {
    for (const auto& g : gens) {
      const auto& dist = g.distortion();
      Integer k = std::max(dist.plus_bound, dist.minus_bound);
      bounds_.emplace_back(k * k, g.degree());
    }
  }

  bool contains(const Integer& height) const {
    for (const auto& [k2, d] : bounds_) {
      Integer p;
      mpz_pow_ui(p.get_mpz_t(), height.get_mpz_t(), d);
      if (p <= k2) return true;
    }
    return false;
  }

  bool contains(const ProjectivePoint& p) const { return contains(p.height()); }

  /// Largest integer H with contains(H).
  Integer max_height() const {
    Integer best = 0;
    for (const auto& [k2, d] : bounds_) {
      Integer r;
      mpz_root(r.get_mpz_t(), k2.get_mpz_t(), d);
      if (r > best) best = r;
    }
    return best;
  }

 private:
  std::vector<std::pair<Integer, unsigned>> bounds_;  // (K^2, d)
};

struct OrbitFinite {
  /// x_0, ..., x_{preperiod + period - 1}; the next point closes the cycle.
  std::vector<ProjectivePoint> orbit;
  std::size_t preperiod = 0;
  std::size_t period = 0;
};

struct OrbitHeightEscape {
  std::size_t step = 0;
  ProjectivePoint point;
  /// h_nv of the witness, which exceeds 2 c(f).
  double height = 0.0;
};

struct OrbitBudgetExceeded {
  std::size_t step = 0;
};

using OrbitOutcome = std::variant<OrbitFinite, OrbitHeightEscape, OrbitBudgetExceeded>;

/// Follows x under the sequence until the (point, word phase) pair repeats,
/// a point leaves T (certifying that x is not preperiodic), or max_steps /
/// the bit budget runs out. Random words have no recurring phase and are
/// rejected.
inline OrbitOutcome forward_orbit(const ProjectivePoint& x, const MapSequence& spec, std::size_t max_steps,
                                  const HeightOptions& opts = {}) {
  if (!spec.has_recurring_phase())
    throw InputError("forward_orbit: random words have no recurring phase; use canonical_height instead");
  const NorthcottSet t(spec.generators());
  std::map<std::pair<ProjectivePoint, std::size_t>, std::size_t> seen;
  std::vector<ProjectivePoint> orbit;
  ProjectivePoint y = x;
  for (std::size_t n = 0; n <= max_steps; ++n) {
    if (!t.contains(y)) return OrbitHeightEscape{n, y, log_abs(y.height())};
    if (const auto phase = spec.phase_at(n)) {
      auto [it, inserted] = seen.emplace(std::make_pair(y, *phase), n);
      if (!inserted) return OrbitFinite{std::move(orbit), it->second, n - it->second};
    }
    orbit.push_back(y);
    if (n == max_steps) break;
    y = spec.at(n)(y);
    if (y.max_bits() > opts.budget_bits) return OrbitBudgetExceeded{n + 1};
  }
  return OrbitBudgetExceeded{max_steps};
}

struct CensusOptions {
  std::size_t max_points = 1'000'000;
  unsigned workers = 1;
};

struct CensusEntry {
  ProjectivePoint point;
  /// A word that keeps the orbit inside T: the prefix, then `cycle` forever.
  std::vector<std::size_t> prefix;
  std::vector<std::size_t> cycle;
};

struct CensusResult {
  Integer coordinate_bound = 0;
  std::vector<ProjectivePoint> northcott_set;
  std::size_t edge_count = 0;
  /// Sorted by point.
  std::vector<CensusEntry> preperiodic;

  std::vector<ProjectivePoint> points() const {
    std::vector<ProjectivePoint> out;
    for (const auto& e : preperiodic) out.push_back(e.point);
    return out;
  }
};

/// All canonical points of P^N(Q) with every |coordinate| <= bound.
inline std::vector<ProjectivePoint> enumerate_points(std::size_t n, long bound, std::size_t max_points) {
  std::vector<ProjectivePoint> out;
  std::vector<long> c(n + 1, -bound);
  for (;;) {
    const auto first = std::find_if(c.begin(), c.end(), [](long v) { return v != 0; });
    if (first != c.end() && *first > 0) {
      long g = 0;
      for (long v : c) g = std::gcd(g, v);
      if (g == 1) {
        std::vector<Integer> coords(c.begin(), c.end());
        out.push_back(ProjectivePoint::from_integers(std::move(coords)));
        if (out.size() > max_points)
          throw EnumerationTooLarge("Northcott set has more than " + std::to_string(max_points) + " points");
      }
    }
    std::size_t k = 0;
    while (k <= n && c[k] == bound) c[k++] = -bound;
    if (k > n) break;
    ++c[k];
  }
  return out;
}

/// Points x of T from which some infinite word keeps the orbit in T, i.e.
/// the vertices of the graph (edge x -> g_j(x) when g_j(x) is in T) that
/// reach a directed cycle. These are exactly the points preperiodic for
/// some word.
inline CensusResult preperiodic_census(std::span<const CheckedMap> gens, const CensusOptions& opts = {}) {
  if (gens.empty()) throw InputError("preperiodic_census: no generators");
  const std::size_t n = gens[0].dimension();
  for (const auto& g : gens) {
    if (g.dimension() != n) throw DimensionMismatch("generators act on different projective spaces");
  }
  const NorthcottSet t(gens);
  CensusResult result;
  result.coordinate_bound = t.max_height();
  if (!result.coordinate_bound.fits_slong_p() || result.coordinate_bound > 1'000'000)
    throw EnumerationTooLarge("coordinate bound " + result.coordinate_bound.get_str() + " is too large");
  result.northcott_set = enumerate_points(n, result.coordinate_bound.get_si(), opts.max_points);
  const auto& verts = result.northcott_set;

  std::unordered_map<ProjectivePoint, std::size_t, ProjectivePoint::Hash> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);

  // edges[v] = (generator, target) for images that stay in T
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges(verts.size());
  parallel_for(verts.size(), opts.workers, [&](std::size_t v) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const ProjectivePoint y = gens[j](verts[v]);
      if (!t.contains(y)) continue;
      edges[v].emplace_back(j, index.at(y));
    }
  });

  std::vector<std::size_t> outdeg(verts.size());
  std::vector<std::vector<std::size_t>> reverse(verts.size());
  for (std::size_t v = 0; v < verts.size(); ++v) {
    outdeg[v] = edges[v].size();
    result.edge_count += edges[v].size();
    for (const auto& [j, w] : edges[v]) reverse[w].push_back(v);
  }
  std::vector<bool> alive(verts.size(), true);
  std::deque<std::size_t> sinks;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (outdeg[v] == 0) sinks.push_back(v);
  }
  while (!sinks.empty()) {
    const std::size_t v = sinks.front();
    sinks.pop_front();
    alive[v] = false;
    for (std::size_t u : reverse[v]) {
      if (--outdeg[u] == 0) sinks.push_back(u);
    }
  }

  for (std::size_t v = 0; v < verts.size(); ++v) {
    if (!alive[v]) continue;
    CensusEntry entry{verts[v], {}, {}};
    std::map<std::size_t, std::size_t> step_of;
    std::vector<std::size_t> word;
    std::size_t cur = v;
    while (!step_of.count(cur)) {
      step_of[cur] = word.size();
      for (const auto& [j, w] : edges[cur]) {
        if (alive[w]) {
          word.push_back(j);
          cur = w;
          break;
        }
      }
    }
    const std::size_t s = step_of[cur];
    entry.prefix.assign(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(s));
    entry.cycle.assign(word.begin() + static_cast<std::ptrdiff_t>(s), word.end());
    result.preperiodic.push_back(std::move(entry));
  }
  std::sort(result.preperiodic.begin(), result.preperiodic.end(),
            [](const CensusEntry& a, const CensusEntry& b) { return a.point < b.point; });
  return result;
}

struct UnboundedRow {
  std::size_t i = 0;
  /// a_i in f_i = (x_0^2 : x_1^2 - a_i x_0 x_1).
  Integer coefficient;
  ProjectivePoint p_i;
  double kappa_plus = 0.0;
  double c_bound = 0.0;
  /// h_nv(p_i) = log i.
  double naive_height = 0.0;
  /// h_i(p_i) = log H(f_i o ... o f_1 (p_i)) / 2^i.
  ExactLogHeight normalized_truncation;
  bool composed_hits_p0 = false;
  bool fixes_p0 = false;
};

struct UnboundedReport {
  std::vector<CheckedMap> maps;
  std::vector<UnboundedRow> rows;
  bool verified = false;
};

/// F_1(x) = x(x-1), F_i(x) = x(x - F_{i-1} o ... o F_1 (i)) and
/// f_i = (x_0^2 : F_i(x_1/x_0) x_0^2). Then f_i o ... o f_1 sends p_i = (1:i)
/// to p_0 = (1:0), which every f_i fixes, so h_i(p_i) = 0 while h_nv(p_i)
/// grows without bound.
inline UnboundedReport unbounded_demo(std::size_t i_max, std::size_t budget_bits = std::size_t{1} << 20) {
  if (i_max < 1) throw InputError("unbounded_demo: i_max must be at least 1");
  UnboundedReport report;
  std::vector<Integer> a{Integer(1)};
  for (std::size_t i = 2; i <= i_max; ++i) {
    Integer t = static_cast<unsigned long>(i);
    for (std::size_t k = 0; k + 1 < i; ++k) {
      t = t * (t - a[k]);
      if (bit_size(t) > budget_bits) throw BudgetExceeded("coefficient a_" + std::to_string(i), i);
    }
    a.push_back(t);
  }
  for (std::size_t i = 1; i <= i_max; ++i) {
    std::vector<IntegerForm> forms{IntegerForm(2, 2, {{{2, 0}, Integer(1)}}),
                                   IntegerForm(2, 2, {{{0, 2}, Integer(1)}, {{1, 1}, Integer(-a[i - 1])}})};
    report.maps.push_back(validate(std::move(forms), "f_" + std::to_string(i)));
  }
  const auto p0 = ProjectivePoint::from_integers({1, 0});
  bool all_ok = true;
  for (std::size_t i = 1; i <= i_max; ++i) {
    UnboundedRow row;
    row.i = i;
    row.coefficient = a[i - 1];
    row.p_i = ProjectivePoint::from_integers({1, static_cast<long>(i)});
    row.kappa_plus = report.maps[i - 1].distortion().kappa_plus;
    row.c_bound = report.maps[i - 1].c_bound();
    row.naive_height = log_abs(row.p_i.height());
    ProjectivePoint y = row.p_i;
    Integer pi = 1;
    for (std::size_t k = 0; k < i; ++k) {
      y = report.maps[k](y);
      pi *= 2;
    }
    row.normalized_truncation = {y.height(), pi};
    row.composed_hits_p0 = (y == p0);
    row.fixes_p0 = (report.maps[i - 1](p0) == p0);
    all_ok = all_ok && row.composed_hits_p0 && row.fixes_p0 && row.normalized_truncation.height == 1;
    report.rows.push_back(std::move(row));
  }
  report.verified = all_ok;
  return report;
}

}  // namespace arithdyn

#endif  // ARITHDYN_ORBITS_HPP
