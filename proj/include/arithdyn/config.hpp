#ifndef ARITHDYN_CONFIG_HPP
#define ARITHDYN_CONFIG_HPP

// JSON problem descriptions:
//
//   { "dim": 1,
//     "maps": [ { "name": "g'2", "degree": 2,
//                 "forms": [ [ [[2,0], 1] ], [ [[0,2], 1] ] ] } ],
//     "sequence": { "type": "constant" | "periodic" | "explicit" | "random",
//                   "word": ["g'2", ...], "prefix": [...], "seed": 7 },
//     "params": { "tol": 1e-6, "depth": 8, ... } }
//
// Each form is a list of [exponent, coefficient] terms. Coefficients are
// JSON integers or decimal strings (for values beyond 64 bits). Word
// entries are map names or zero-based indices. This header needs
// nlohmann/json and is the only part of the library that does.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "arithdyn/heights.hpp"

namespace arithdyn {

struct Problem {
  std::size_t dim = 1;
  std::vector<CheckedMap> maps;
  std::optional<MapSequence> sequence;
  nlohmann::json params = nlohmann::json::object();

  const MapSequence& require_sequence() const {
    if (!sequence) throw ConfigError("the config defines no sequence");
    return *sequence;
  }
};

namespace detail {

inline Integer parse_coefficient(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw ConfigError("bad integer '" + j.get<std::string>() + "'");
    return v;
  }
  throw ConfigError("coefficients must be integers or decimal strings");
}

inline std::size_t resolve_word_entry(const nlohmann::json& j, const std::vector<CheckedMap>& maps) {
  if (j.is_number_integer()) {
    if (j.get<long long>() < 0) throw ConfigError("word index must be non-negative");
    const auto k = j.get<std::size_t>();
    if (k >= maps.size()) throw ConfigError("word index " + std::to_string(k) + " names no map");
    return k;
  }
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (maps[k].name() == name) return k;
    }
    throw ConfigError("word entry '" + name + "' names no map");
  }
  throw ConfigError("word entries must be map names or indices");
}

inline std::vector<std::size_t> parse_word(const nlohmann::json& j, const std::vector<CheckedMap>& maps) {
  if (!j.is_array()) throw ConfigError("a word must be an array");
  std::vector<std::size_t> w;
  for (const auto& e : j) w.push_back(resolve_word_entry(e, maps));
  return w;
}

}  // namespace detail

inline IntegerForm parse_form(const nlohmann::json& j, std::size_t num_vars, unsigned degree) {
  if (!j.is_array()) throw ConfigError("a form must be an array of [exponent, coefficient] terms");
  IntegerForm f(num_vars, degree);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array())
      throw ConfigError("a term must be [[e_0, ..., e_N], coefficient]");
    Exponent e;
    for (const auto& k : term[0]) {
      if (!k.is_number_unsigned()) throw ConfigError("exponents must be nonnegative integers");
      e.push_back(k.get<unsigned>());
    }
    f.add_term(e, detail::parse_coefficient(term[1]));
  }
  return f;
}

/// Builds and validates every map, then the sequence. Validation failures
/// (Degenerate, DegreeTooSmall, ...) propagate unchanged.
inline Problem load_problem(const nlohmann::json& j) {
  Problem p;
  try {
    if (!j.is_object()) throw ConfigError("the config must be a JSON object");
    p.dim = j.at("dim").get<std::size_t>();
    if (p.dim < 1) throw ConfigError("dim must be at least 1");
    const auto& maps = j.at("maps");
    if (!maps.is_array() || maps.empty()) throw ConfigError("maps must be a nonempty array");
    for (const auto& m : maps) {
      const auto name = m.value("name", "map" + std::to_string(p.maps.size()));
      const auto degree = m.at("degree").get<unsigned>();
      const auto& forms_json = m.at("forms");
      if (!forms_json.is_array() || forms_json.size() != p.dim + 1)
        throw DimensionMismatch("map '" + name + "' needs " + std::to_string(p.dim + 1) + " forms");
      std::vector<IntegerForm> forms;
      for (const auto& f : forms_json) forms.push_back(parse_form(f, p.dim + 1, degree));
      p.maps.push_back(validate(std::move(forms), name));
    }
    if (j.contains("sequence")) {
      const auto& s = j.at("sequence");
      const auto type = s.value("type", std::string("constant"));
      if (type == "constant") {
        const std::size_t idx = s.contains("word") ? detail::parse_word(s.at("word"), p.maps).at(0)
                                : s.contains("map") ? detail::resolve_word_entry(s.at("map"), p.maps)
                                                    : 0;
        p.sequence = MapSequence::constant(p.maps, idx);
      } else if (type == "periodic") {
        p.sequence = MapSequence::periodic(p.maps, detail::parse_word(s.at("word"), p.maps));
      } else if (type == "explicit") {
        p.sequence = MapSequence::explicit_word(p.maps, detail::parse_word(s.value("prefix", nlohmann::json::array()), p.maps),
                                                detail::parse_word(s.at("word"), p.maps));
      } else if (type == "random") {
        p.sequence = MapSequence::random(p.maps, s.value("seed", std::uint64_t{0}), s.value("offset", std::uint64_t{0}));
      } else {
        throw ConfigError("unknown sequence type '" + type + "'");
      }
    }
    if (j.contains("params")) {
      if (!j.at("params").is_object()) throw ConfigError("params must be an object");
      p.params = j.at("params");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

inline Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return load_problem(j);
}

/// Inverse of parse_form, for round-trip tests and report echoes.
inline nlohmann::json form_to_json(const IntegerForm& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) {
    nlohmann::json coeff = c.fits_slong_p() ? nlohmann::json(c.get_si()) : nlohmann::json(c.get_str());
    out.push_back(nlohmann::json::array({e, coeff}));
  }
  return out;
}

}  // namespace arithdyn

#endif  // ARITHDYN_CONFIG_HPP
