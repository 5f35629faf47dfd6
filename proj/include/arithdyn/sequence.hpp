#ifndef ARITHDYN_SEQUENCE_HPP
#define ARITHDYN_SEQUENCE_HPP

// Sequences f = (f_1, f_2, ...) drawn from a finite list of generators.
// Position 0 holds f_1. The template parameter is the map type (CheckedMap
// for exact heights, ComplexLiftMap for Green functions); it must provide
// degree() and c_bound().

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arithdyn/errors.hpp"

namespace arithdyn {

/// Stateless 64-bit mixer (SplitMix64 finalizer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based child seed: stream `index` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index ^ 0xd1b54a32d192ed03ULL));
}

/// Draws j with probability weights[j] / sum(weights) from the counter
/// (seed, position). Exact integer rejection sampling, no modulo bias.
inline std::size_t draw_weighted(std::span<const unsigned> weights, std::uint64_t seed, std::uint64_t position) {
  std::uint64_t total = 0;
  for (unsigned w : weights) total += w;
  if (total == 0) throw InputError("draw_weighted: weights sum to zero");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % total);
  std::uint64_t u = derive_seed(seed, position);
  while (u >= limit) u = mix64(u);
  std::uint64_t r = u % total;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (r < weights[j]) return j;
    r -= weights[j];
  }
  return weights.size() - 1;
}

/// Word of `length` i.i.d. indices with P(j) = d_j / sum_k d_k, starting at
/// stream position `offset`. Deterministic in (seed, offset).
inline std::vector<std::size_t> sample_word(std::span<const unsigned> degrees, std::size_t length, std::uint64_t seed,
                                            std::uint64_t offset = 0) {
  if (degrees.empty()) throw InputError("sample_word: no generators");
  std::vector<std::size_t> word(length);
  for (std::size_t i = 0; i < length; ++i) word[i] = draw_weighted(degrees, seed, offset + i);
  return word;
}

enum class SequenceKind { Constant, PeriodicWord, ExplicitWord, RandomWord };

inline const char* to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::Constant: return "constant";
    case SequenceKind::PeriodicWord: return "periodic";
    case SequenceKind::ExplicitWord: return "explicit";
    case SequenceKind::RandomWord: return "random";
  }
  return "?";
}

template <class Map>
class SequenceSpec {
 public:
  /// f_i = g for all i.
  static SequenceSpec constant(Map g) { return constant(std::vector<Map>{std::move(g)}, 0); }

  static SequenceSpec constant(std::vector<Map> gens, std::size_t index) {
    SequenceSpec s(std::move(gens), SequenceKind::Constant);
    s.tail_ = {index};
    s.check_indices();
    return s;
  }

  /// f_i = g_{word[(i-1) mod L]}.
  static SequenceSpec periodic(std::vector<Map> gens, std::vector<std::size_t> word) {
    if (word.empty()) throw InputError("periodic word must be nonempty");
    SequenceSpec s(std::move(gens), SequenceKind::PeriodicWord);
    s.tail_ = std::move(word);
    s.check_indices();
    return s;
  }

  /// The finite prefix, then the tail word repeated forever.
  static SequenceSpec explicit_word(std::vector<Map> gens, std::vector<std::size_t> prefix,
                                    std::vector<std::size_t> tail) {
    if (tail.empty()) throw InputError("explicit word needs a nonempty extension word");
    SequenceSpec s(std::move(gens), SequenceKind::ExplicitWord);
    s.prefix_ = std::move(prefix);
    s.tail_ = std::move(tail);
    s.check_indices();
    return s;
  }

  /// f_i = g_{w_i} with w drawn from the degree-weighted measure.
  static SequenceSpec random(std::vector<Map> gens, std::uint64_t seed, std::uint64_t offset = 0) {
    SequenceSpec s(std::move(gens), SequenceKind::RandomWord);
    s.seed_ = seed;
    s.offset_ = offset;
    return s;
  }

  SequenceKind kind() const noexcept { return kind_; }
  const std::vector<Map>& generators() const noexcept { return *gens_; }
  const std::vector<std::size_t>& prefix() const noexcept { return prefix_; }
  /// The repeating word (Constant: the single index; Periodic: the word).
  const std::vector<std::size_t>& tail() const noexcept { return tail_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t offset() const noexcept { return offset_; }

  const std::vector<unsigned>& degrees() const noexcept { return degrees_; }

  /// Generator index of f_{pos+1}.
  std::size_t index_at(std::size_t pos) const {
    switch (kind_) {
      case SequenceKind::Constant: return tail_[0];
      case SequenceKind::PeriodicWord: return tail_[pos % tail_.size()];
      case SequenceKind::ExplicitWord:
        return pos < prefix_.size() ? prefix_[pos] : tail_[(pos - prefix_.size()) % tail_.size()];
      case SequenceKind::RandomWord: return draw_weighted(degrees_, seed_, offset_ + pos);
    }
    return 0;
  }

  const Map& at(std::size_t pos) const { return (*gens_)[index_at(pos)]; }

  /// First `length` generator indices.
  std::vector<std::size_t> word(std::size_t length) const {
    if (kind_ == SequenceKind::RandomWord) return sample_word(degrees(), length, seed_, offset_);
    std::vector<std::size_t> w(length);
    for (std::size_t i = 0; i < length; ++i) w[i] = index_at(i);
    return w;
  }

  /// Whether the word eventually repeats with a known phase.
  bool has_recurring_phase() const noexcept { return kind_ != SequenceKind::RandomWord; }

  /// Phase of position pos inside the repeating part, or nullopt while still
  /// in the non-repeating prefix (and always for random words).
  std::optional<std::size_t> phase_at(std::size_t pos) const {
    switch (kind_) {
      case SequenceKind::Constant: return 0;
      case SequenceKind::PeriodicWord: return pos % tail_.size();
      case SequenceKind::ExplicitWord:
        if (pos < prefix_.size()) return std::nullopt;
        return (pos - prefix_.size()) % tail_.size();
      case SequenceKind::RandomWord: return std::nullopt;
    }
    return std::nullopt;
  }

  /// c(f) bound: the maximum certified c over the generators.
  double c_bound() const {
    double c = 0.0;
    for (const auto& g : *gens_) c = std::max(c, g.c_bound());
    return c;
  }

  /// S(f) = (f_2, f_3, ...).
  SequenceSpec shift(std::size_t steps = 1) const {
    SequenceSpec s = *this;
    switch (kind_) {
      case SequenceKind::Constant: break;
      case SequenceKind::PeriodicWord: {
        const std::size_t r = steps % tail_.size();
        std::rotate(s.tail_.begin(), s.tail_.begin() + static_cast<std::ptrdiff_t>(r), s.tail_.end());
        break;
      }
      case SequenceKind::ExplicitWord: {
        const std::size_t dropped = std::min(steps, prefix_.size());
        s.prefix_.erase(s.prefix_.begin(), s.prefix_.begin() + static_cast<std::ptrdiff_t>(dropped));
        const std::size_t r = (steps - dropped) % tail_.size();
        std::rotate(s.tail_.begin(), s.tail_.begin() + static_cast<std::ptrdiff_t>(r), s.tail_.end());
        break;
      }
      case SequenceKind::RandomWord: s.offset_ += steps; break;
    }
    return s;
  }

 private:
  SequenceSpec(std::vector<Map> gens, SequenceKind kind)
      : gens_(std::make_shared<const std::vector<Map>>(std::move(gens))), kind_(kind) {
    if (gens_->empty()) throw InputError("a sequence needs at least one generator");
    for (const auto& g : *gens_) degrees_.push_back(g.degree());
  }

  void check_indices() const {
    auto check = [&](const std::vector<std::size_t>& w) {
      for (std::size_t j : w) {
        if (j >= gens_->size())
          throw InputError("word index " + std::to_string(j) + " addresses no generator");
      }
    };
    check(prefix_);
    check(tail_);
  }

  std::shared_ptr<const std::vector<Map>> gens_;
  SequenceKind kind_;
  std::vector<unsigned> degrees_;
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> tail_;
  std::uint64_t seed_ = 0;
  std::uint64_t offset_ = 0;
};

}  // namespace arithdyn

#endif  // ARITHDYN_SEQUENCE_HPP
