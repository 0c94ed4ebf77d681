#pragma once

#include <cstddef>
#include <vector>

#include "treespec/couplings.hpp"

namespace treespec {

/// Geometry and couplings of a radial tree.
///
/// gaps[n] = t_{n+1} - t_n for n >= 0 (t_0 = 0 is the root), couplings[n - 1]
/// is the coupling of generation n >= 1. The root has branching number 1.
struct RadialTreeSpec {
  std::vector<double> gaps;
  std::vector<VertexCoupling> couplings;
  double root_angle = kDirichlet;

  void validate() const;

  /// Distance t_n of generation n from the root.
  double distance(std::size_t generation) const;
  /// Branching number of generation n (1 for the root).
  int branching(std::size_t generation) const;
  const VertexCoupling& coupling(std::size_t generation) const { return couplings.at(generation - 1); }
  /// min over available gaps.
  double min_gap() const;
};

/// b_0 b_1 ... b_{n-1}: number of generation-n vertices.
std::size_t vertex_count(const RadialTreeSpec& spec, std::size_t generation);

}  // namespace treespec
