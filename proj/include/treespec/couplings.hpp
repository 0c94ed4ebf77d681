#pragma once

// Vertex couplings on radial trees, the point interactions they induce on the
// halfline, and the maps between the two.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace treespec {

using complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
/// Boundary angle encoding a Dirichlet condition, u(t) = 0.
inline constexpr double kDirichlet = kPi / 2;

/// Coupling data of one tree generation: (alpha, beta, gamma), the branching
/// number b and the b - 1 eigenphases of the unitary acting on the
/// non-symmetric part of the outgoing edges.
struct VertexCoupling {
  double alpha = 0.0;
  double beta = 0.0;
  complex gamma{};
  int branching = 1;
  std::vector<double> eigenphases;

  /// Validated construction; eigenphases default to pi (U = -I) when omitted.
  static VertexCoupling make(double alpha, double beta, complex gamma, int branching,
                             std::vector<double> eigenphases = {});
  void validate() const;

  friend bool operator==(const VertexCoupling&, const VertexCoupling&) = default;
};

/// Point-interaction data (a, q, c) of one interface on the halfline.
struct InterfaceCoupling {
  double a = 0.0;
  double q = 0.0;
  complex c{};

  void validate() const;
  friend bool operator==(const InterfaceCoupling&, const InterfaceCoupling&) = default;
};

struct CouplingTolerance {
  /// Absolute tolerance for scalar equality tests (separating manifold, zero denominators).
  double scalar = 1e-9;
  /// Absolute tolerance when rounding a reconstructed branching number to an integer.
  double integer = 1e-9;
};

/// 4(sqrt b + 1)^2 + (alpha beta + |gamma|^2)(sqrt b - 1)^2 + 4(1 - b) Re gamma.
double common_denominator(const VertexCoupling& c);

/// Tree-generation coupling -> halfline interface coupling.
/// Throws DegenerateDenominator when the common denominator vanishes.
InterfaceCoupling reduce_coupling(const VertexCoupling& c, const CouplingTolerance& tol = {});

struct ReconstructOptions {
  CouplingTolerance tol;
  /// When set, the Re c = 0 branch rejects inputs with a q + |c|^2 + 4 = 0,
  /// whose preimage under reduce_coupling contains every branching number.
  bool strict = false;
};

/// Inverse of reduce_coupling on couplings with Re gamma = 0. Returns the
/// Re gamma = 0 representative with empty eigenphases.
VertexCoupling reconstruct_coupling(const InterfaceCoupling& m, const ReconstructOptions& opts = {});

bool is_separating(const VertexCoupling& c, double tol = 1e-9);
bool is_separating(const InterfaceCoupling& m, double tol = 1e-9);

enum class PresetKind { standard, delta, delta_prime };

/// Standard: (0, 0, 0), U = -I. Delta: (strength, 0, 0), U = -I. Delta prime: (0, strength, 0), U = I.
VertexCoupling preset(PresetKind kind, int branching, double strength = 0.0);

}  // namespace treespec
