#include <doctest.h>

#include <random>

#include "treespec/errors.hpp"
#include "treespec/seqgen.hpp"

using namespace treespec;

namespace {

Letter letter(double alpha, int b = 2) { return Letter{1.0, VertexCoupling::make(alpha, 0, 0.0, b)}; }

// All (p, q) within bounds for which the window is eventually periodic.
std::vector<EventualPeriod> brute_force(const std::vector<int>& w, std::size_t max_p, std::size_t max_q) {
  std::vector<EventualPeriod> out;
  for (std::size_t q = 1; q <= max_q; ++q) {
    for (std::size_t p = 0; p <= max_p; ++p) {
      bool ok = true;
      for (std::size_t i = p; i + q < w.size(); ++i) ok = ok && w[i] == w[i + q];
      if (ok) out.push_back({p, q});
    }
  }
  return out;
}

std::vector<int> symbols(const DataWord& w) {
  std::vector<int> out;
  for (const Letter& l : w.letters()) out.push_back(static_cast<int>(l.coupling.alpha * 100));
  return out;
}

}  // namespace

TEST_CASE("periodic words") {
  const DataWord w = periodic_word({letter(1)}, {}, 5);
  CHECK(w.size() == 5);
  CHECK(w.alphabet().size() == 1);
  const DataWord v = periodic_word({letter(1), letter(2)}, {letter(3)}, 6);
  CHECK(symbols(v) == std::vector<int>{300, 100, 200, 100, 200, 100});
  CHECK(detect_eventual_period(v, 2, 2) == EventualPeriod{1, 2});
  CHECK_THROWS_AS(periodic_word({}, {}, 3), Error);
}

TEST_CASE("power-of-two words") {
  const DataWord w = power2_word(letter(1), letter(0), 9);
  CHECK(symbols(w) == std::vector<int>{0, 100, 0, 100, 0, 0, 0, 100, 0});
  CHECK(w.at_generation(1).coupling.alpha == 0.0);
  CHECK(w.at_generation(2).coupling.alpha == 1.0);
}

TEST_CASE("power-of-two prefixes are never detected periodic") {
  for (std::size_t length : {32u, 64u, 128u}) {
    const DataWord w = power2_word(letter(1), letter(0), length);
    CHECK_FALSE(detect_eventual_period(w, length / 2, length / 4));
    CHECK(brute_force(symbols(w), length / 2, length / 4).empty());
  }
}

TEST_CASE("substitution words") {
  const SubstitutionRules fib{{'a', "ab"}, {'b', "a"}};
  CHECK(substitute(fib, 'a', 5) == "abaababaabaab");
  const DataWord w = substitution_word(fib, 'a', 5, {{'a', letter(1)}, {'b', letter(2)}});
  CHECK(w.size() == 13);
  try {
    substitute({{'a', "ac"}}, 'a', 2);
    FAIL("expected UndefinedLetter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_letter);
  }
  CHECK_THROWS_AS(substitution_word(fib, 'a', 3, {{'a', letter(1)}}), Error);
}

TEST_CASE("detector finds planted periods") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = rng() % 8, q = 1 + rng() % 6, n = 64;
    // Random block of primitive period q; the preperiod differs from the periodic continuation at its last letter.
    std::vector<int> block;
    do {
      block.clear();
      for (std::size_t i = 0; i < q; ++i) block.push_back(static_cast<int>(rng() % 3));
    } while ([&] {
      for (std::size_t d = 1; d < q; ++d) {
        if (q % d == 0 && std::equal(block.begin() + d, block.end(), block.begin())) return true;
      }
      return false;
    }());
    std::vector<int> w;
    for (std::size_t i = 0; i < p; ++i) w.push_back(static_cast<int>(rng() % 3));
    for (std::size_t i = 0; w.size() < n; ++i) w.push_back(block[i % q]);
    if (p > 0) w[p - 1] = block[(q - 1) % q] + 5;  // breaks periodicity exactly at index p - 1
    const auto got = detect_eventual_period(std::span<const int>(w), 16, 8);
    REQUIRE(got);
    CHECK(*got == EventualPeriod{p, q});
    const auto all = brute_force(w, 16, 8);
    REQUIRE(!all.empty());
    CHECK(all.front() == *got);
  }
}

TEST_CASE("shift consistency") {
  const std::vector<int> w{5, 6, 1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2, 3, 1, 2};
  const auto a = detect_eventual_period(std::span<const int>(w), 4, 4);
  REQUIRE(a);
  CHECK(*a == EventualPeriod{2, 3});
  const std::vector<int> shifted(w.begin() + 1, w.end());
  CHECK(*detect_eventual_period(std::span<const int>(shifted), 4, 4) == EventualPeriod{1, 3});
}

TEST_CASE("window constraints") {
  const std::vector<int> w(10, 1);
  CHECK_THROWS_AS(detect_eventual_period(std::span<const int>(w), 5, 3), Error);
  CHECK_THROWS_AS(detect_eventual_period(std::span<const int>(w), 1, 0), Error);
  CHECK(*detect_eventual_period(std::span<const int>(w), 4, 3) == EventualPeriod{0, 1});
}

TEST_CASE("letters compare with tolerance and the alphabet is canonical") {
  CHECK(same_letter(letter(1.0), letter(1.0 + 1e-13)));
  CHECK_FALSE(same_letter(letter(1.0), letter(1.0 + 1e-9)));
  CHECK_FALSE(same_letter(letter(1.0, 2), letter(1.0, 3)));
  const DataWord a({letter(2), letter(1), letter(2)});
  const DataWord b({letter(1), letter(2), letter(1)});
  REQUIRE(a.alphabet().size() == 2);
  CHECK(same_letter(a.alphabet()[0], b.alphabet()[0]));
  CHECK(same_letter(a.alphabet()[1], b.alphabet()[1]));
}

TEST_CASE("words become tree specs") {
  const DataWord w = power2_word(letter(1, 4), letter(0, 9), 6);
  const RadialTreeSpec spec = w.to_tree(0.5);
  CHECK(spec.gaps.size() == 7);
  CHECK(spec.gaps[0] == 0.5);
  CHECK(spec.couplings.size() == 6);
  CHECK(spec.branching(2) == 4);
  CHECK(spec.branching(3) == 9);
  CHECK(spec.branching(0) == 1);
}
