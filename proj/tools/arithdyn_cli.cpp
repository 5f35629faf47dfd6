// Command-line front end. Every subcommand writes one JSON report (stdout
// or --out) and exits 0 on success, 1 on malformed input, 2 when a budget or
// numerical contract stops the computation.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "arithdyn.hpp"
#include "arithdyn/config.hpp"

namespace {

using namespace arithdyn;
using Json = nlohmann::ordered_json;

// Flags left unset fall back to the config's "params" block, then to defaults.
struct Flags {
  std::string config;
  std::optional<double> tol;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> budget_bits;
  std::optional<std::uint64_t> budget_points;
  std::optional<unsigned> workers;
  std::optional<std::size_t> max_points;
  std::optional<std::size_t> imax;
  std::optional<double> extent;
  std::optional<std::string> point;
  std::optional<std::string> phi;
  std::optional<std::string> depths;
  std::string out;
  std::string csv;
};

class Settings {
 public:
  Settings(const Flags& f, const nlohmann::json& params) : flags_(f), params_(params) {}

  template <class T>
  T get(const std::optional<T>& flag, const char* key, T fallback) const {
    if (flag) return *flag;
    if (params_.contains(key)) {
      try {
        return params_.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("param '") + key + "' has the wrong type");
      }
    }
    return fallback;
  }

  double tol(double fallback) const {
    const double t = get(flags_.tol, "tol", fallback);
    if (!(t > 0.0)) throw ConfigError("tol must be positive");
    return t;
  }
  std::size_t positive(const std::optional<std::size_t>& flag, const char* key, std::size_t fallback) const {
    const auto v = get(flag, key, fallback);
    if (v == 0) throw ConfigError(std::string(key) + " must be positive");
    return v;
  }
  std::string text(const std::optional<std::string>& flag, const char* key, const std::string& fallback = {}) const {
    return get(flag, key, fallback);
  }
  HeightOptions heights() const {
    HeightOptions h;
    h.budget_bits = positive(flags_.budget_bits, "budget_bits", h.budget_bits);
    return h;
  }
  unsigned workers() const { return get(flags_.workers, "workers", 1u); }

  const Flags& flags() const { return flags_; }

 private:
  const Flags& flags_;
  const nlohmann::json& params_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ProjectivePoint parse_rational_point(const std::string& s, std::size_t dim) {
  const auto parts = split(s, ',');
  if (parts.size() != dim + 1) throw DimensionMismatch("point needs " + std::to_string(dim + 1) + " coordinates");
  std::vector<Rational> q;
  for (const auto& p : parts) {
    Rational r;
    if (r.set_str(p, 10) != 0) throw ConfigError("bad rational coordinate '" + p + "'");
    r.canonicalize();
    q.push_back(r);
  }
  return normalize(q);
}

Complex parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw ConfigError("empty complex number");
  auto number = [&](const std::string& t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::logic_error&) {
      throw ConfigError("bad complex number '" + s + "'");
    }
    if (used != t.size()) throw ConfigError("bad complex number '" + s + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  if (split_at == std::string::npos) return {0.0, number(body)};
  return {number(body.substr(0, split_at)), number(body.substr(split_at))};
}

std::vector<Complex> parse_complex_vector(const std::string& s, std::size_t dim) {
  const auto parts = split(s, ',');
  if (parts.size() != dim + 1) throw DimensionMismatch("point needs " + std::to_string(dim + 1) + " coordinates");
  std::vector<Complex> v;
  for (const auto& p : parts) v.push_back(parse_complex(p));
  return v;
}

CPoint parse_cpoint(const std::string& s) {
  if (s == "inf" || s == "infinity") return CPoint::infinity();
  return CPoint::finite(parse_complex(s));
}

std::vector<TestFunction> parse_phis(const std::string& s) {
  if (s.empty() || s == "builtin") return TestFunction::builtins();
  std::vector<TestFunction> out;
  for (const auto& name : split(s, ',')) out.push_back(TestFunction::parse(name));
  return out;
}

std::vector<std::size_t> parse_depths(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& p : split(s, ',')) {
    try {
      out.push_back(std::stoul(p));
    } catch (const std::logic_error&) {
      throw ConfigError("bad depth '" + p + "'");
    }
  }
  if (out.empty()) throw ConfigError("no depths given");
  return out;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json cpoint_json(const CPoint& p) {
  if (p.at_infinity) return "inf";
  return complex_json(p.z);
}

Json word_json(const std::vector<std::size_t>& w, const std::vector<CheckedMap>& maps) {
  Json out = Json::array();
  for (auto k : w) out.push_back(maps[k].name());
  return out;
}

Json sequence_json(const MapSequence& s) {
  Json j;
  j["type"] = to_string(s.kind());
  if (s.kind() == SequenceKind::RandomWord) {
    j["seed"] = s.seed();
    j["offset"] = s.offset();
  } else {
    j["prefix"] = word_json(s.prefix(), s.generators());
    j["word"] = word_json(s.tail(), s.generators());
  }
  j["c_bound"] = s.c_bound();
  return j;
}

void write_csv(const std::string& path, const std::string& header, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << header << '\n';
  for (const auto& l : lines) out << l << '\n';
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---- subcommands --------------------------------------------------------

int cmd_validate(const Problem& p, const Settings&, Json& r) {
  Json maps = Json::array();
  for (const auto& m : p.maps) {
    Json j;
    j["name"] = m.name();
    j["degree"] = m.degree();
    j["certificate_exponent"] = m.certificate().exponent;
    j["certificate_denominator"] = m.certificate().denominator.get_str();
    j["plus_bound"] = m.distortion().plus_bound.get_str();
    j["minus_bound"] = m.distortion().minus_bound.get_str();
    j["kappa_plus"] = m.distortion().kappa_plus;
    j["kappa_minus"] = m.distortion().kappa_minus;
    j["c_bound"] = m.c_bound();
    if (m.dimension() == 1) j["resultant"] = resultant_p1(m.forms()[0], m.forms()[1]).get_str();
    maps.push_back(j);
  }
  r["maps"] = maps;
  if (p.sequence) r["sequence"] = sequence_json(*p.sequence);
  r["valid"] = true;
  return 0;
}

int cmd_height(const Problem& p, const Settings& s, Json& r) {
  const auto x = parse_rational_point(s.text(s.flags().point, "point", "1,1"), p.dim);
  const auto depth = s.get(s.flags().depth, "depth", std::size_t{8});
  const auto& seq = p.require_sequence();
  const auto hs = height_sequence(x, seq, depth, s.heights());
  r["point"] = x.to_string();
  r["sequence"] = sequence_json(seq);
  Json rows = Json::array();
  for (std::size_t i = 0; i < hs.size(); ++i)
    rows.push_back({{"i", i}, {"H", hs[i].height.get_str()}, {"normalizer", hs[i].normalizer.get_str()},
                    {"value", hs[i].value()}});
  r["truncations"] = rows;
  return 0;
}

int cmd_canheight(const Problem& p, const Settings& s, Json& r) {
  const auto x = parse_rational_point(s.text(s.flags().point, "point", "1,1"), p.dim);
  HeightOptions opts = s.heights();
  opts.max_depth = s.get(s.flags().depth, "max_depth", opts.max_depth);
  const auto& seq = p.require_sequence();
  const auto h = canonical_height(x, seq, s.tol(1e-6), opts);
  r["point"] = x.to_string();
  r["sequence"] = sequence_json(seq);
  r["value"] = h.value;
  r["radius"] = h.radius;
  r["depth"] = h.depth;
  r["c_used"] = h.c_used;
  r["H"] = h.truncation.height.get_str();
  r["normalizer"] = h.truncation.normalizer.get_str();
  r["preperiodic"] = h.preperiodic;
  r["conforming"] = h.conforming;
  if (!h.conforming) {
    std::cerr << "BudgetExceeded: stopped at depth " << h.depth << " with radius " << h.radius
              << " above tol\n";
    return 2;
  }
  return 0;
}

int cmd_orbit(const Problem& p, const Settings& s, Json& r) {
  const auto x = parse_rational_point(s.text(s.flags().point, "point", "1,1"), p.dim);
  const auto steps = s.get(s.flags().depth, "depth", std::size_t{64});
  const auto& seq = p.require_sequence();
  const auto outcome = forward_orbit(x, seq, steps, s.heights());
  r["point"] = x.to_string();
  r["sequence"] = sequence_json(seq);
  if (const auto* f = std::get_if<OrbitFinite>(&outcome)) {
    r["outcome"] = "finite";
    Json orbit = Json::array();
    for (const auto& y : f->orbit) orbit.push_back(y.to_string());
    r["orbit"] = orbit;
    r["preperiod"] = f->preperiod;
    r["period"] = f->period;
    return 0;
  }
  if (const auto* e = std::get_if<OrbitHeightEscape>(&outcome)) {
    r["outcome"] = "height_escape";
    r["step"] = e->step;
    r["escaped_point"] = e->point.to_string();
    r["log_height"] = e->height;
    return 0;
  }
  r["outcome"] = "budget_exceeded";
  r["step"] = std::get<OrbitBudgetExceeded>(outcome).step;
  std::cerr << "BudgetExceeded: orbit undecided after " << r["step"] << " steps\n";
  return 2;
}

int cmd_census(const Problem& p, const Settings& s, Json& r) {
  CensusOptions opts;
  opts.max_points = s.positive(s.flags().max_points, "max_points", opts.max_points);
  opts.workers = s.workers();
  const auto c = preperiodic_census(p.maps, opts);
  r["coordinate_bound"] = c.coordinate_bound.get_str();
  r["northcott_size"] = c.northcott_set.size();
  r["edges"] = c.edge_count;
  Json pts = Json::array();
  std::vector<std::string> lines;
  for (const auto& e : c.preperiodic) {
    pts.push_back({{"point", e.point.to_string()}, {"prefix", word_json(e.prefix, p.maps)},
                   {"cycle", word_json(e.cycle, p.maps)}});
    std::string line = "\"" + e.point.to_string() + "\",";
    for (auto k : e.prefix) line += p.maps[k].name() + " ";
    line += ",";
    for (auto k : e.cycle) line += p.maps[k].name() + " ";
    lines.push_back(line);
  }
  r["preperiodic"] = pts;
  if (!s.flags().csv.empty()) write_csv(s.flags().csv, "point,prefix,cycle", lines);
  return 0;
}

int cmd_average(const Problem& p, const Settings& s, Json& r) {
  const auto x = parse_rational_point(s.text(s.flags().point, "point", "1,1"), p.dim);
  AveragingOptions opts;
  opts.workers = s.workers();
  opts.heights = s.heights();
  const auto depth = s.get(s.flags().depth, "depth", std::size_t{8});
  const auto samples = s.positive(s.flags().samples, "samples", 10000);
  const auto seed = s.get(s.flags().seed, "seed", std::uint64_t{1});
  const auto rep = verify_averaging(x, p.maps, depth, samples, seed, opts);
  r["point"] = x.to_string();
  r["depth"] = rep.depth;
  r["samples"] = rep.samples;
  r["seed"] = seed;
  r["exact"] = rep.exact_value;
  r["monte_carlo"] = rep.mc_value;
  r["stderr"] = rep.mc_stderr;
  r["truncation_radius"] = rep.truncation_radius;
  r["discrepancy"] = rep.discrepancy;
  r["allowed"] = rep.allowed;
  r["pass"] = rep.pass;
  return 0;
}

int cmd_green(const Problem& p, const Settings& s, Json& r) {
  const auto lifts = lift_sequence(p.require_sequence());
  const double tol = s.tol(1e-10);
  const auto x = parse_complex_vector(s.text(s.flags().point, "point", "1,1"), p.dim);
  const auto g = green_function(lifts, std::span<const Complex>(x), tol);
  const auto psi = admissible_potential(lifts, std::span<const Complex>(x), tol);
  Json pt = Json::array();
  for (const auto& c : x) pt.push_back(complex_json(c));
  r["point"] = pt;
  r["c_bar"] = lifts.c_bound();
  r["green"] = {{"value", g.value}, {"radius", g.radius}, {"depth", g.depth}};
  r["potential"] = {{"value", psi.value}, {"radius", psi.radius}};
  if (!s.flags().csv.empty()) {
    if (p.dim != 1) throw UnsupportedDimension(p.dim);
    const auto n = s.positive(s.flags().grid, "grid", 101);
    const double extent = s.get(s.flags().extent, "extent", 2.0);
    const auto rows = green_grid(lifts, n, extent, tol, s.workers());
    std::vector<std::string> lines;
    for (const auto& row : rows)
      lines.push_back(fmt(row.x) + "," + fmt(row.y) + "," + fmt(row.green) + "," + fmt(row.potential));
    write_csv(s.flags().csv, "x,y,G,psi", lines);
    r["grid_csv"] = {{"points", rows.size()}, {"extent", extent}};
  }
  return 0;
}

int cmd_pair(const Problem& p, const Settings& s, Json& r) {
  if (p.dim != 1) throw UnsupportedDimension(p.dim);
  const auto lifts = lift_sequence(p.require_sequence());
  const auto n = s.positive(s.flags().grid, "grid", 512);
  const double tol = s.tol(1e-8);
  const auto grid = PotentialGrid::build(lifts, n, tol, s.workers());
  Json rows = Json::array();
  for (const auto& phi : parse_phis(s.text(s.flags().phi, "phi")))
    rows.push_back({{"phi", phi.name()}, {"pairing", current_pairing(grid, phi)}});
  r["grid"] = n;
  r["tol"] = tol;
  r["pairings"] = rows;
  return 0;
}

int cmd_preimages(const Problem& p, const Settings& s, Json& r) {
  if (p.dim != 1) throw UnsupportedDimension(p.dim);
  const auto lifts = lift_sequence(p.require_sequence());
  const auto a = parse_cpoint(s.text(s.flags().point, "point", "2"));
  CloudOptions opts;
  opts.workers = s.workers();
  opts.budget = s.get(s.flags().budget_points, "budget_points", opts.budget);
  const auto depth = s.get(s.flags().depth, "depth", std::size_t{4});
  const auto cloud = preimage_cloud(lifts, a, depth, opts);
  r["source"] = cpoint_json(a);
  r["depth"] = depth;
  r["total"] = cloud.total;
  r["count"] = cloud.count();
  r["distinct"] = cloud.points.size();
  r["round_trip_error"] = round_trip_error(lifts, cloud);
  if (!s.flags().csv.empty()) {
    std::vector<std::string> lines;
    for (const auto& w : cloud.points)
      lines.push_back(fmt(w.point.at_infinity ? 0.0 : w.point.z.real()) + "," +
                      fmt(w.point.at_infinity ? 0.0 : w.point.z.imag()) + "," + (w.point.at_infinity ? "1" : "0") +
                      "," + std::to_string(w.multiplicity));
    write_csv(s.flags().csv, "re,im,at_infinity,multiplicity", lines);
  } else if (cloud.points.size() <= 64) {
    Json pts = Json::array();
    for (const auto& w : cloud.points) pts.push_back({{"point", cpoint_json(w.point)}, {"multiplicity", w.multiplicity}});
    r["points"] = pts;
  }
  return 0;
}

int cmd_equidist(const Problem& p, const Settings& s, Json& r) {
  if (p.dim != 1) throw UnsupportedDimension(p.dim);
  const auto lifts = lift_sequence(p.require_sequence());
  const auto a = parse_cpoint(s.text(s.flags().point, "point", "2"));
  const auto depths = parse_depths(s.text(s.flags().depths, "depths", "2,4,6,8"));
  const auto phis = parse_phis(s.text(s.flags().phi, "phi"));
  CloudOptions opts;
  opts.workers = s.workers();
  opts.budget = s.get(s.flags().budget_points, "budget_points", opts.budget);
  const auto n = s.positive(s.flags().grid, "grid", 512);
  const auto rep = equidistribution_report(lifts, a, depths, phis, n, s.tol(1e-8), opts);
  r["source"] = cpoint_json(a);
  r["grid"] = n;
  Json rows = Json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"depth", row.depth}, {"phi", row.phi}, {"empirical", row.empirical}, {"current", row.current},
                    {"delta", row.delta}, {"round_trip", row.round_trip}});
  r["rows"] = rows;
  Json trends = Json::array();
  for (const auto& t : rep.trends) {
    Json inv = Json::array();
    for (const auto& [j, k] : t.inversions) inv.push_back({j, k});
    trends.push_back({{"phi", t.phi}, {"decreased", t.decreased}, {"floor", t.floor}, {"resolved", t.resolved},
                      {"holds", t.holds}, {"inversions", inv}});
  }
  r["trends"] = trends;
  return 0;
}

int cmd_unbounded(const Settings& s, Json& r) {
  const auto imax = s.positive(s.flags().imax, "imax", 6);
  const auto rep = unbounded_demo(imax, s.heights().budget_bits);
  Json rows = Json::array();
  for (const auto& row : rep.rows)
    rows.push_back({{"i", row.i},
                    {"a_i", row.coefficient.get_str()},
                    {"p_i", row.p_i.to_string()},
                    {"kappa_plus", row.kappa_plus},
                    {"c_bound", row.c_bound},
                    {"naive_height", row.naive_height},
                    {"normalized_truncation", row.normalized_truncation.value()},
                    {"image_H", row.normalized_truncation.height.get_str()},
                    {"composed_hits_p0", row.composed_hits_p0},
                    {"fixes_p0", row.fixes_p0}});
  r["rows"] = rows;
  r["verified"] = rep.verified;
  if (!rep.verified) {
    std::cerr << "demo-unbounded: an identity failed to verify\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical heights, Green functions and equidistribution for sequences of morphisms"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "problem description (JSON)");
  app.add_option("--tol", f.tol, "target accuracy");
  app.add_option("--depth", f.depth, "iteration or word depth");
  app.add_option("--samples", f.samples, "Monte Carlo samples");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--grid", f.grid, "quadrature or CSV grid resolution");
  app.add_option("--budget-bits", f.budget_bits, "bit cap per coordinate");
  app.add_option("--budget-points", f.budget_points, "cap on preimage cloud size");
  app.add_option("--workers", f.workers, "worker threads");
  app.add_option("--max-points", f.max_points, "cap on the Northcott enumeration");
  app.add_option("--imax", f.imax, "largest index for demo-unbounded");
  app.add_option("--extent", f.extent, "half-width of the Green CSV grid");
  app.add_option("--point", f.point, "point: x0,x1,... (rational or complex) or a chart value / inf");
  app.add_option("--phi", f.phi, "comma-separated test functions");
  app.add_option("--depths", f.depths, "comma-separated depths");
  app.add_option("--out", f.out, "write the JSON report here instead of stdout");
  app.add_option("--csv", f.csv, "write point or grid data here");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"validate", "check maps and print distortion certificates"},
      {"height", "exact truncations h_i along the sequence"},
      {"canheight", "canonical height with certified radius"},
      {"orbit", "forward orbit outcome"},
      {"census", "all preperiodic points of the generator family"},
      {"average", "eigensystem height: exact recursion against Monte Carlo"},
      {"green", "Green function and potential at a point (optional CSV grid)"},
      {"pair", "pairings of the Green current with test functions"},
      {"preimages", "backward orbit cloud"},
      {"equidist", "equidistribution table over depths and test functions"},
      {"demo-unbounded", "the unbounded sequence whose truncations vanish"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Json report;
  report["schema"] = 1;
  report["command"] = command;
  int status = 0;
  try {
    if (command == "demo-unbounded") {
      const nlohmann::json none = nlohmann::json::object();
      const Settings s(f, none);
      status = cmd_unbounded(s, report);
    } else {
      if (f.config.empty()) throw ConfigError("--config is required for '" + command + "'");
      const Problem p = load_problem_file(f.config);
      const Settings s(f, p.params);
      if (command == "validate") status = cmd_validate(p, s, report);
      else if (command == "height") status = cmd_height(p, s, report);
      else if (command == "canheight") status = cmd_canheight(p, s, report);
      else if (command == "orbit") status = cmd_orbit(p, s, report);
      else if (command == "census") status = cmd_census(p, s, report);
      else if (command == "average") status = cmd_average(p, s, report);
      else if (command == "green") status = cmd_green(p, s, report);
      else if (command == "pair") status = cmd_pair(p, s, report);
      else if (command == "preimages") status = cmd_preimages(p, s, report);
      else if (command == "equidist") status = cmd_equidist(p, s, report);
    }
  } catch (const InputError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const ContractViolation& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  const std::string text = report.dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(f.out);
    if (!out) {
      std::cerr << "cannot write '" << f.out << "'\n";
      return 1;
    }
    out << text;
  }
  return status;
}
