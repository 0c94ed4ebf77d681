#include "treespec/seqgen.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace treespec {

bool same_letter(const Letter& x, const Letter& y, double tol) {
  const VertexCoupling& a = x.coupling;
  const VertexCoupling& b = y.coupling;
  if (a.branching != b.branching || a.eigenphases.size() != b.eigenphases.size()) return false;
  auto close = [tol](double u, double v) { return std::abs(u - v) <= tol; };
  if (!close(x.gap, y.gap) || !close(a.alpha, b.alpha) || !close(a.beta, b.beta) ||
      !close(a.gamma.real(), b.gamma.real()) || !close(a.gamma.imag(), b.gamma.imag())) {
    return false;
  }
  for (std::size_t i = 0; i < a.eigenphases.size(); ++i) {
    if (!close(a.eigenphases[i], b.eigenphases[i])) return false;
  }
  return true;
}

namespace {

bool letter_less(const Letter& x, const Letter& y) {
  const VertexCoupling& a = x.coupling;
  const VertexCoupling& b = y.coupling;
  return std::tie(x.gap, a.branching, a.alpha, a.beta) < std::tie(y.gap, b.branching, b.alpha, b.beta) ||
         (std::tie(x.gap, a.branching, a.alpha, a.beta) == std::tie(y.gap, b.branching, b.alpha, b.beta) &&
          (std::make_pair(a.gamma.real(), a.gamma.imag()) < std::make_pair(b.gamma.real(), b.gamma.imag()) ||
           (a.gamma == b.gamma && a.eigenphases < b.eigenphases)));
}

}  // namespace

DataWord::DataWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (!(letters_[i].gap > 0.0)) throw Error(ErrorKind::invalid_argument, "data word: gaps must be positive", i + 1);
    try {
      letters_[i].coupling.validate();
    } catch (const Error& e) {
      throw e.at_generation(i + 1);
    }
  }
  alphabet_ = letters_;
  std::sort(alphabet_.begin(), alphabet_.end(), letter_less);
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end(),
                              [](const Letter& x, const Letter& y) { return same_letter(x, y); }),
                  alphabet_.end());
}

RadialTreeSpec DataWord::to_tree(double root_gap, double root_angle) const {
  RadialTreeSpec spec;
  spec.root_angle = root_angle;
  spec.gaps.push_back(root_gap);
  for (const Letter& l : letters_) {
    spec.gaps.push_back(l.gap);
    spec.couplings.push_back(l.coupling);
  }
  return spec;
}

DataWord periodic_word(const std::vector<Letter>& block, const std::vector<Letter>& preperiod, std::size_t length) {
  if (block.empty()) throw Error(ErrorKind::empty_block, "periodic_word: block must be nonempty");
  std::vector<Letter> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(i < preperiod.size() ? preperiod[i] : block[(i - preperiod.size()) % block.size()]);
  }
  return DataWord(std::move(out));
}

DataWord power2_word(const Letter& special, const Letter& fallback, std::size_t length) {
  if (length == 0) throw Error(ErrorKind::invalid_argument, "power2_word: length must be >= 1");
  std::vector<Letter> out;
  out.reserve(length);
  for (std::size_t n = 1; n <= length; ++n) {
    const bool power_of_two = n >= 2 && (n & (n - 1)) == 0;
    out.push_back(power_of_two ? special : fallback);
  }
  return DataWord(std::move(out));
}

std::string substitute(const SubstitutionRules& rules, char seed, std::size_t iterations) {
  std::string word(1, seed);
  for (std::size_t it = 0; it < iterations; ++it) {
    std::string next;
    for (char ch : word) {
      const auto r = rules.find(ch);
      if (r == rules.end()) {
        throw Error(ErrorKind::undefined_letter, std::string("substitution: no rule for letter '") + ch + "'");
      }
      next += r->second;
    }
    word = std::move(next);
  }
  return word;
}

DataWord substitution_word(const SubstitutionRules& rules, char seed, std::size_t iterations,
                           const std::map<char, Letter>& letters) {
  const std::string symbols = substitute(rules, seed, iterations);
  std::vector<Letter> out;
  out.reserve(symbols.size());
  for (char ch : symbols) {
    const auto l = letters.find(ch);
    if (l == letters.end()) {
      throw Error(ErrorKind::undefined_letter, std::string("substitution: no data for letter '") + ch + "'");
    }
    out.push_back(l->second);
  }
  return DataWord(std::move(out));
}

std::optional<EventualPeriod> detect_eventual_period(const DataWord& word, std::size_t max_preperiod,
                                                     std::size_t max_period) {
  return detect_eventual_period(std::span<const Letter>(word.letters()), max_preperiod, max_period,
                                [](const Letter& x, const Letter& y) { return same_letter(x, y); });
}

}  // namespace treespec
