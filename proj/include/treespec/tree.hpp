#pragma once

// Finite radial trees truncated at a given depth (Dirichlet at the cut), their
// eigenvalues from the full vertex conditions, and the comparison with the
// decomposition into halfline operators.

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "treespec/grid.hpp"
#include "treespec/radial_tree.hpp"
#include "treespec/spectra.hpp"

namespace treespec {

/// Orthonormal zero-sum rows used for the non-symmetric vertex conditions.
enum class ZeroSumBasis {
  fourier,        ///< v_s(j) = exp(2 pi i s j / b) / sqrt(b), s = 1..b-1
  gram_schmidt,   ///< real basis from e_j - e_{b-1} by Gram-Schmidt
};

/// (b - 1) x b matrix with orthonormal rows, each summing to zero.
Eigen::MatrixXcd zero_sum_basis(int branching, ZeroSumBasis kind);

struct SecularOptions {
  std::size_t max_unknowns = 4096;
  ZeroSumBasis basis = ZeroSumBasis::fourier;
};

/// Number of edges of the tree truncated at generation `depth`.
std::size_t edge_count(const RadialTreeSpec& spec, std::size_t depth);

/// Secular matrix (2|E| x 2|E|, rows normalized) of the truncated tree at real
/// energy E. Unknowns are (A_e, B_e) with f_e(x) = A_e C(x) + B_e S(x).
Eigen::MatrixXcd assemble_secular(const RadialTreeSpec& spec, std::size_t depth, double energy,
                                  const SecularOptions& opts = {});

/// Singular values of the secular matrix, descending.
Eigen::VectorXd secular_singular_values(const RadialTreeSpec& spec, std::size_t depth, double energy,
                                        const SecularOptions& opts = {});

/// Smallest singular value of the secular matrix.
double secular_sigma_min(const RadialTreeSpec& spec, std::size_t depth, double energy, const SecularOptions& opts = {});

struct TreeEigenvalue {
  double energy = 0.0;
  std::size_t multiplicity = 1;
};

struct TreeEigenOptions {
  SecularOptions secular;
  double points_per_unit = 2000.0;
  /// Relative threshold: sigma_min < sigma_tol * sigma_max marks a zero.
  double sigma_tol = 1e-7;
  double width = 1e-9;
  Execution exec = Execution::parallel;
};

/// Eigenvalues of the truncated tree in the window, from local minima of sigma_min.
std::vector<TreeEigenvalue> tree_eigenvalues(const RadialTreeSpec& spec, std::size_t depth, Window window,
                                             const TreeEigenOptions& opts = {});

/// One halfline operator of the decomposition, truncated at t_depth.
struct Component {
  std::size_t generation = 0;  ///< n
  std::size_t index = 0;       ///< s (0 for the root component)
  double left_angle = kDirichlet;
  std::size_t multiplicity = 1;  ///< b_0 ... b_{n-1}
};

std::vector<Component> direct_sum_components(const RadialTreeSpec& spec, std::size_t depth);

/// Halfline system of a component on [t_n, t_depth] with the reduced interface couplings.
HalflineSystem component_system(const RadialTreeSpec& spec, std::size_t depth, const Component& c);

/// Multiset of eigenvalues of the truncated halfline direct sum (entries with
/// equal energies to within 1e-9 are merged, multiplicities added).
std::vector<TreeEigenvalue> halfline_direct_sum_eigenvalues(const RadialTreeSpec& spec, std::size_t depth,
                                                            Window window, const EigenOptions& opts = {});

struct SpectralComparison {
  Window window;
  std::vector<TreeEigenvalue> tree;
  std::vector<TreeEigenvalue> direct_sum;
  std::vector<std::pair<double, double>> matched;  ///< (tree, direct sum), expanded by multiplicity
  std::size_t tree_count = 0;
  std::size_t direct_sum_count = 0;
  double max_mismatch = 0.0;
  double tol = 0.0;
  bool pass = false;
};

SpectralComparison compare_spectra(const RadialTreeSpec& spec, std::size_t depth, Window window, double tol,
                                   const TreeEigenOptions& tree_opts = {}, const EigenOptions& halfline_opts = {});

/// 1 + sum_{n=1}^{depth-1} b_0...b_{n-1} (b_n - 1); equals the number of leaves.
std::size_t component_multiplicity_total(const RadialTreeSpec& spec, std::size_t depth);

}  // namespace treespec
