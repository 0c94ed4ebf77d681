#pragma once

// Finite-prefix evidence for the hypotheses of the periodicity theorem for
// radial trees: finitely many data values (a), finitely many separating
// generations (b), nonvanishing reduction denominator (c), and injectivity of
// the reduction (d), plus the edge-length lower bound tau.

#include <cstddef>
#include <vector>

#include "treespec/radial_tree.hpp"

namespace treespec {

struct ConditionOptions {
  double tol = 1e-9;
  /// Equality tolerance when counting distinct data values.
  double value_tol = 1e-12;
  /// Offenders at generations >= tail_start falsify a condition; earlier ones
  /// count as the allowed finite exceptions. 0 selects horizon / 2 + 1.
  std::size_t tail_start = 0;
  /// Condition (a) is reported false if any data set has more distinct values than this.
  std::size_t max_distinct = 32;
};

struct ConditionReport {
  std::size_t horizon = 0;
  std::size_t tail_start = 0;
  /// Always true: the report only covers generations 1..horizon.
  bool finite_horizon_only = true;

  // (a)
  std::size_t distinct_gaps = 0;
  std::size_t distinct_branching = 0;
  std::size_t distinct_alpha = 0;
  std::size_t distinct_beta = 0;
  std::size_t distinct_gamma = 0;
  std::vector<std::size_t> unit_branching;
  bool finitely_many_values = true;

  // (b)
  std::vector<std::size_t> separating;
  bool finitely_many_separating = true;

  // (c)
  std::vector<std::size_t> vanishing_denominator;
  bool denominator_nonzero = true;

  // (d)
  std::vector<std::size_t> real_gamma;          ///< Re gamma != 0
  std::vector<std::size_t> degenerate_fiber;    ///< alpha beta + |gamma|^2 + 4 = 0
  bool injective = true;

  double tau = 0.0;
  bool gaps_bounded_below = true;

  bool all_hold() const {
    return finitely_many_values && finitely_many_separating && denominator_nonzero && injective && gaps_bounded_below;
  }
};

/// Evaluates the conditions on generations 1..horizon. Throws EmptyPrefix for
/// horizon 0 and InvalidArgument if the spec has fewer generations.
ConditionReport check_conditions(const RadialTreeSpec& spec, std::size_t horizon, const ConditionOptions& opts = {});

}  // namespace treespec
