#include "treespec/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treespec/errors.hpp"

namespace treespec {

void RadialTreeSpec::validate() const {
  for (double g : gaps) {
    if (!(g > 0.0) || !std::isfinite(g)) throw Error(ErrorKind::invalid_argument, "gaps must be positive and finite");
  }
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    try {
      couplings[i].validate();
    } catch (const Error& e) {
      throw e.at_generation(i + 1);
    }
  }
  if (!(root_angle > -kPi / 2 && root_angle <= kPi / 2)) {
    throw Error(ErrorKind::invalid_argument, "root angle must lie in (-pi/2, pi/2]");
  }
}

double RadialTreeSpec::distance(std::size_t generation) const {
  if (generation > gaps.size()) {
    throw Error(ErrorKind::invalid_argument, "generation " + std::to_string(generation) + " beyond available gaps");
  }
  double t = 0.0;
  for (std::size_t n = 0; n < generation; ++n) t += gaps[n];
  return t;
}

int RadialTreeSpec::branching(std::size_t generation) const {
  return generation == 0 ? 1 : coupling(generation).branching;
}

double RadialTreeSpec::min_gap() const {
  return gaps.empty() ? 0.0 : *std::min_element(gaps.begin(), gaps.end());
}

std::size_t vertex_count(const RadialTreeSpec& spec, std::size_t generation) {
  std::size_t count = 1;
  for (std::size_t n = 0; n < generation; ++n) count *= static_cast<std::size_t>(spec.branching(n));
  return count;
}

namespace {

template <class T, class Eq, class Less>
std::size_t count_distinct(std::vector<T> values, Less less, Eq eq) {
  std::sort(values.begin(), values.end(), less);
  std::size_t count = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || !eq(values[i - 1], values[i])) ++count;
  }
  return count;
}

std::size_t count_distinct_real(std::vector<double> values, double tol) {
  return count_distinct(
      std::move(values), std::less<>{}, [tol](double x, double y) { return std::abs(x - y) <= tol; });
}

bool offends_tail(const std::vector<std::size_t>& gens, std::size_t tail_start) {
  return std::any_of(gens.begin(), gens.end(), [&](std::size_t g) { return g >= tail_start; });
}

}  // namespace

ConditionReport check_conditions(const RadialTreeSpec& spec, std::size_t horizon, const ConditionOptions& opts) {
  if (horizon == 0) throw Error(ErrorKind::empty_prefix, "check_conditions: horizon must be positive");
  if (horizon > spec.couplings.size()) {
    throw Error(ErrorKind::invalid_argument, "check_conditions: horizon " + std::to_string(horizon) +
                                                 " exceeds the " + std::to_string(spec.couplings.size()) +
                                                 " available generations");
  }
  spec.validate();

  ConditionReport r;
  r.horizon = horizon;
  r.tail_start = opts.tail_start == 0 ? horizon / 2 + 1 : opts.tail_start;

  std::vector<double> gaps, alphas, betas;
  std::vector<int> bs;
  std::vector<complex> gammas;
  for (std::size_t n = 1; n <= horizon; ++n) {
    const VertexCoupling& c = spec.coupling(n);
    if (n < spec.gaps.size()) gaps.push_back(spec.gaps[n]);
    alphas.push_back(c.alpha);
    betas.push_back(c.beta);
    bs.push_back(c.branching);
    gammas.push_back(c.gamma);

    if (c.branching == 1) r.unit_branching.push_back(n);
    if (is_separating(c, opts.tol)) r.separating.push_back(n);
    if (std::abs(common_denominator(c)) <= opts.tol) r.vanishing_denominator.push_back(n);
    if (std::abs(c.gamma.real()) > opts.tol) r.real_gamma.push_back(n);
    if (std::abs(c.alpha * c.beta + std::norm(c.gamma) + 4.0) <= opts.tol) r.degenerate_fiber.push_back(n);
  }

  r.distinct_gaps = count_distinct_real(gaps, opts.value_tol);
  r.distinct_alpha = count_distinct_real(alphas, opts.value_tol);
  r.distinct_beta = count_distinct_real(betas, opts.value_tol);
  std::sort(bs.begin(), bs.end());
  r.distinct_branching = static_cast<std::size_t>(std::unique(bs.begin(), bs.end()) - bs.begin());
  const double vt = opts.value_tol;
  r.distinct_gamma = count_distinct(
      gammas,
      [](complex x, complex y) { return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag()); },
      [vt](complex x, complex y) { return std::abs(x.real() - y.real()) <= vt && std::abs(x.imag() - y.imag()) <= vt; });

  const std::size_t most = std::max({r.distinct_gaps, r.distinct_branching, r.distinct_alpha, r.distinct_beta,
                                     r.distinct_gamma});
  r.finitely_many_values = most <= opts.max_distinct && !offends_tail(r.unit_branching, r.tail_start);
  r.finitely_many_separating = !offends_tail(r.separating, r.tail_start);
  r.denominator_nonzero = !offends_tail(r.vanishing_denominator, r.tail_start);
  r.injective = !offends_tail(r.real_gamma, r.tail_start) && !offends_tail(r.degenerate_fiber, r.tail_start);

  // tau over t_{n+1} - t_n for n = 0..horizon (as far as gaps are available).
  const std::size_t last = std::min(spec.gaps.size(), horizon + 1);
  r.tau = last == 0 ? 0.0 : *std::min_element(spec.gaps.begin(), spec.gaps.begin() + static_cast<std::ptrdiff_t>(last));
  r.gaps_bounded_below = r.tau > opts.tol;
  return r;
}

}  // namespace treespec
