#pragma once

// Spectral quantities of halfline systems: Floquet bands, Weyl m-functions,
// the reflectionless defect, truncated eigenvalues and Lyapunov exponents.

#include <array>
#include <cstddef>
#include <vector>

#include "treespec/grid.hpp"
#include "treespec/halfline.hpp"

namespace treespec {

struct Band {
  double lower = 0.0;
  double upper = 0.0;
  friend bool operator==(const Band&, const Band&) = default;
};

struct BandStructure {
  Window window;
  std::vector<Band> bands;
  std::size_t grid_points = 0;
  /// Grid points where the unit-circle and |trace| <= 2 classifications differ
  /// (only counted where the trace test applies: real monodromy with det 1).
  std::size_t classifier_disagreements = 0;
  /// Grid points where the trace test applied.
  std::size_t trace_checked = 0;
};

struct BandOptions {
  std::size_t grid_points = 2001;
  double unit_tol = 1e-8;
  double edge_tol = 1e-10;
  Execution exec = Execution::parallel;
};

/// Eigenvalues of a 2x2 matrix.
std::array<complex, 2> eigenvalues(const TransferMatrix& m);

/// E lies in a band iff the monodromy has an eigenvalue with ||lambda| - 1| <= tol.
bool in_band_unit_circle(const TransferMatrix& monodromy, double tol = 1e-8);
/// |trace| <= 2; meaningful only for real monodromies with det 1.
bool in_band_trace(const TransferMatrix& monodromy);
/// Whether the trace criterion applies (real entries, det = 1 within tol).
bool trace_test_applies(const TransferMatrix& monodromy, double tol = 1e-12);

BandStructure band_structure(const HalflineSystem& sys, Window window, const BandOptions& opts = {});

struct WeylValue {
  complex m_plus;
  complex m_minus;
  double basepoint = 0.0;
  complex energy;
};

/// Weyl m-functions m_+ (decaying at +infinity) and m_- (decaying at
/// -infinity in the two-sided periodic extension) at Im z > 0.
WeylValue weyl_m(const HalflineSystem& sys, complex z, double basepoint);

/// Boundary values m(E + i0), extrapolated from E + i eta over `etas`.
WeylValue weyl_m_boundary(const HalflineSystem& sys, double energy, double basepoint,
                          const std::vector<double>& etas = {1e-4, 1e-6, 1e-8});

/// |m_+(E + i eta) + conj(m_-(E + i eta))|.
double reflectionless_defect(const HalflineSystem& sys, double energy, double eta, double basepoint);
/// Same defect evaluated on the extrapolated boundary values.
double reflectionless_defect_limit(const HalflineSystem& sys, double energy, double basepoint);

/// A basepoint just left of the first periodic interaction point.
double default_basepoint(const HalflineSystem& sys);

struct EigenOptions {
  /// Scan density in points per unit of sign(E) sqrt|E|.
  double points_per_unit = 2000.0;
  double root_tol = 1e-10;
  Execution exec = Execution::parallel;
};

/// u(right_end; E) for the solution fixed by the left boundary condition.
double shooting_value(const HalflineSystem& sys, double right_end, double energy);

/// Energies in the window at which u(right_end) = 0 (Dirichlet truncation), sorted.
/// Throws ComplexCouplingUnsupported if an interface on [origin, right_end] has Im c != 0.
std::vector<double> halfline_eigenvalues(const HalflineSystem& sys, double right_end, Window window,
                                         const EigenOptions& opts = {});

struct LyapunovEstimate {
  double exponent = 0.0;
  std::size_t points = 0;
  double length = 0.0;
};

/// log ||transfer(origin, x_n)|| / (x_n - origin) with x_n just past the n-th point.
LyapunovEstimate lyapunov_exponent(const HalflineSystem& sys, double energy, std::size_t n_points);

}  // namespace treespec
