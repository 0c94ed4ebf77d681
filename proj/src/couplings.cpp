#include "treespec/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "treespec/errors.hpp"

namespace treespec {

namespace {

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

VertexCoupling VertexCoupling::make(double alpha, double beta, complex gamma, int branching,
                                    std::vector<double> eigenphases) {
  if (branching >= 1 && eigenphases.empty()) {
    eigenphases.assign(static_cast<std::size_t>(branching - 1), kPi);
  }
  VertexCoupling c{alpha, beta, gamma, branching, std::move(eigenphases)};
  c.validate();
  return c;
}

void VertexCoupling::validate() const {
  if (branching < 1) {
    throw Error(ErrorKind::invalid_argument, "branching number must be >= 1, got " + std::to_string(branching));
  }
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !finite(gamma)) {
    throw Error(ErrorKind::invalid_argument, "coupling coefficients must be finite");
  }
  if (eigenphases.size() != static_cast<std::size_t>(branching - 1)) {
    throw Error(ErrorKind::invalid_argument, "expected " + std::to_string(branching - 1) + " eigenphases, got " +
                                                 std::to_string(eigenphases.size()));
  }
  for (double theta : eigenphases) {
    if (!(theta > -kPi && theta <= kPi)) {
      throw Error(ErrorKind::invalid_argument, "eigenphases must lie in (-pi, pi]");
    }
  }
}

void InterfaceCoupling::validate() const {
  if (!std::isfinite(a) || !std::isfinite(q) || !finite(c)) {
    throw Error(ErrorKind::invalid_argument, "interface coefficients must be finite");
  }
}

double common_denominator(const VertexCoupling& c) {
  const double b = c.branching;
  const double rb = std::sqrt(b);
  const double s = c.alpha * c.beta + std::norm(c.gamma);
  return 4.0 * (rb + 1.0) * (rb + 1.0) + s * (rb - 1.0) * (rb - 1.0) + 4.0 * (1.0 - b) * c.gamma.real();
}

InterfaceCoupling reduce_coupling(const VertexCoupling& c, const CouplingTolerance& tol) {
  const double d = common_denominator(c);
  if (std::abs(d) <= tol.scalar) {
    throw Error(ErrorKind::degenerate_denominator, "reduce_coupling: common denominator vanishes");
  }
  const double b = c.branching;
  const double rb = std::sqrt(b);
  const double s = c.alpha * c.beta + std::norm(c.gamma);
  InterfaceCoupling m;
  m.a = 16.0 * c.alpha / d;
  m.q = 16.0 * b * c.beta / d;
  const complex numer((1.0 - b) * (4.0 + s) + 4.0 * (b + 1.0) * c.gamma.real(), 8.0 * rb * c.gamma.imag());
  m.c = 2.0 * numer / d;
  return m;
}

VertexCoupling reconstruct_coupling(const InterfaceCoupling& m, const ReconstructOptions& opts) {
  m.validate();
  const double eps = opts.tol.scalar;

  if (std::abs(m.c.real()) <= eps) {
    // b = 1 is the only branching number compatible with Re c = 0 when
    // alpha beta + |gamma|^2 + 4 != 0; otherwise every b maps here.
    if (opts.strict && std::abs(m.a * m.q + std::norm(m.c) + 4.0) <= eps) {
      throw Error(ErrorKind::degenerate_denominator,
                  "reconstruct_coupling: a q + |c|^2 + 4 = 0, branching number is not determined");
    }
    return VertexCoupling{m.a, m.q, complex(0.0, m.c.imag()), 1, {}};
  }

  const double ab = m.a * m.q;
  const double den_b = std::norm(2.0 + m.c) + ab;
  if (std::abs(den_b) <= eps) {
    throw Error(ErrorKind::degenerate_denominator, "reconstruct_coupling: |2 + c|^2 + a q vanishes");
  }
  const double b_real = (std::norm(2.0 - m.c) + ab) / den_b;
  const double b_round = std::round(b_real);
  if (b_round < 2.0 || std::abs(b_real - b_round) > opts.tol.integer * std::max(1.0, b_round)) {
    throw Error(ErrorKind::non_integer_branching,
                "reconstruct_coupling: branching number " + std::to_string(b_real) + " is not an integer >= 2");
  }
  const double b = b_round;
  const double rb = std::sqrt(b);
  const double den_i = m.c.real() * (rb - 1.0) * (rb - 1.0) - 2.0 * (1.0 - b);
  if (std::abs(den_i) <= eps) {
    throw Error(ErrorKind::degenerate_denominator, "reconstruct_coupling: Re c (sqrt b - 1)^2 - 2(1 - b) vanishes");
  }
  const double scale = -32.0 * (1.0 - b) * rb / den_i;

  VertexCoupling c;
  c.branching = static_cast<int>(b);
  c.alpha = m.a * scale / 16.0;
  c.beta = m.q * scale / (16.0 * b);
  c.gamma = complex(0.0, m.c.imag() * scale / (16.0 * rb));
  return c;
}

bool is_separating(const VertexCoupling& c, double tol) {
  return std::abs(c.alpha * c.beta + std::norm(c.gamma) - 4.0) <= tol && std::abs(c.gamma.imag()) <= tol;
}

bool is_separating(const InterfaceCoupling& m, double tol) {
  return std::abs(m.a * m.q + std::norm(m.c) - 4.0) <= tol && std::abs(m.c.imag()) <= tol;
}

VertexCoupling preset(PresetKind kind, int branching, double strength) {
  if (branching < 1) throw Error(ErrorKind::invalid_argument, "preset: branching number must be >= 1");
  const auto n = static_cast<std::size_t>(branching - 1);
  switch (kind) {
    case PresetKind::standard:
      return VertexCoupling{0.0, 0.0, {}, branching, std::vector<double>(n, kPi)};
    case PresetKind::delta:
      return VertexCoupling{strength, 0.0, {}, branching, std::vector<double>(n, kPi)};
    case PresetKind::delta_prime:
      return VertexCoupling{0.0, strength, {}, branching, std::vector<double>(n, 0.0)};
  }
  throw Error(ErrorKind::invalid_argument, "preset: unknown kind");
}

}  // namespace treespec
