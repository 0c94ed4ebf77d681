#pragma once

// Coupling-data words indexed by generation, generators for periodic,
// power-of-two and substitution words, and a finite-window detector for
// eventual periodicity.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treespec/couplings.hpp"
#include "treespec/errors.hpp"
#include "treespec/radial_tree.hpp"

namespace treespec {

/// One generation of data: the gap t_{n+1} - t_n and the coupling at t_n.
struct Letter {
  double gap = 1.0;
  VertexCoupling coupling;
};

/// Tolerant equality used for letters (1e-12 on every scalar).
bool same_letter(const Letter& x, const Letter& y, double tol = 1e-12);

class DataWord {
 public:
  DataWord() = default;
  explicit DataWord(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  /// Letter of generation n (1-based).
  const Letter& at_generation(std::size_t n) const { return letters_.at(n - 1); }
  /// Distinct letters, canonically sorted.
  const std::vector<Letter>& alphabet() const { return alphabet_; }

  /// Tree spec whose generation n carries letter n; the root edge gets `root_gap`.
  RadialTreeSpec to_tree(double root_gap = 1.0, double root_angle = kDirichlet) const;

 private:
  std::vector<Letter> letters_;
  std::vector<Letter> alphabet_;
};

/// Preperiod followed by cyclic repetitions of block, truncated to length. Throws EmptyBlock.
DataWord periodic_word(const std::vector<Letter>& block, const std::vector<Letter>& preperiod, std::size_t length);

/// `special` at generations 2, 4, 8, ..., `fallback` elsewhere.
DataWord power2_word(const Letter& special, const Letter& fallback, std::size_t length);

using SubstitutionRules = std::map<char, std::string>;

/// Symbolic word after `iterations` applications of the rules to the seed. Throws UndefinedLetter.
std::string substitute(const SubstitutionRules& rules, char seed, std::size_t iterations);

/// Substitution word with each symbol replaced by its letter. Throws UndefinedLetter.
DataWord substitution_word(const SubstitutionRules& rules, char seed, std::size_t iterations,
                           const std::map<char, Letter>& letters);

struct EventualPeriod {
  std::size_t preperiod = 0;
  std::size_t period = 1;
  friend bool operator==(const EventualPeriod&, const EventualPeriod&) = default;
};

/// Smallest (p, q), ordered by q then p, with w[i] = w[i + q] for i in [p, n - q).
/// Requires max_preperiod + 2 max_period <= n (WindowTooShort otherwise).
template <class T, class Eq = std::equal_to<>>
std::optional<EventualPeriod> detect_eventual_period(std::span<const T> word, std::size_t max_preperiod,
                                                     std::size_t max_period, Eq eq = {}) {
  const std::size_t n = word.size();
  if (max_period == 0 || max_preperiod + 2 * max_period > n) {
    throw Error(ErrorKind::window_too_short, "detect_eventual_period: need max_preperiod + 2 max_period <= length");
  }
  for (std::size_t q = 1; q <= max_period; ++q) {
    // Last index i < n - q with w[i] != w[i + q]; the smallest valid p is one past it.
    std::size_t p = 0;
    for (std::size_t i = n - q; i-- > 0;) {
      if (!eq(word[i], word[i + q])) {
        p = i + 1;
        break;
      }
    }
    if (p <= max_preperiod) return EventualPeriod{p, q};
  }
  return std::nullopt;
}

std::optional<EventualPeriod> detect_eventual_period(const DataWord& word, std::size_t max_preperiod,
                                                     std::size_t max_period);

}  // namespace treespec
