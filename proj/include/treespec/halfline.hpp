#pragma once

// Halfline Laplacians with generalized point interactions and the transfer
// matrices that propagate Cauchy data (u, u') through them.

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <vector>

#include "treespec/couplings.hpp"

namespace treespec {

/// Maps (u, u')(x) to (u, u')(y) for a solution of -u'' = z u.
using TransferMatrix = Eigen::Matrix2cd;

struct PeriodHint {
  std::size_t preperiod = 0;  ///< index of the first periodic interaction point
  std::size_t length = 1;     ///< number of points per period
};

struct Site {
  double position = 0.0;
  InterfaceCoupling coupling;
};

/// Interaction points t_k > origin with couplings, and the left boundary angle
/// theta: u'(origin) + tan(theta) u(origin) = 0.
///
/// With a period hint (p, q) the stored points must cover indices 0..p+q; the
/// system then continues periodically past the stored points, with period
/// length points[p+q] - points[p].
class HalflineSystem {
 public:
  HalflineSystem(double origin, std::vector<double> points, std::vector<InterfaceCoupling> couplings,
                 double left_boundary = kDirichlet, std::optional<PeriodHint> period = std::nullopt);

  /// Periodic system: the cell (offsets within one period, couplings) repeats
  /// with period `period_length` starting at `first_point`.
  static HalflineSystem periodic(double origin, double first_point, std::vector<double> cell_offsets,
                                 std::vector<InterfaceCoupling> cell, double period_length,
                                 double left_boundary = kDirichlet);
  /// Single coupling repeated at spacing `spacing`, first point at origin + spacing.
  static HalflineSystem chain(const InterfaceCoupling& m, double spacing, double origin = 0.0,
                              double left_boundary = kDirichlet);

  double origin() const { return origin_; }
  double left_boundary() const { return left_boundary_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<InterfaceCoupling>& couplings() const { return couplings_; }
  const std::optional<PeriodHint>& period() const { return period_; }
  bool is_periodic() const { return period_.has_value(); }
  double period_length() const;

  /// Number of interaction points; infinite (SIZE_MAX) when periodic.
  std::size_t site_count() const;
  /// k-th interaction point, continued periodically past the stored ones.
  Site site(std::size_t k) const;
  /// Index of the first interaction point strictly greater than x.
  std::size_t first_site_after(double x) const;

  /// Same system translated by s.
  HalflineSystem shifted(double s) const;

 private:
  double origin_;
  std::vector<double> points_;
  std::vector<InterfaceCoupling> couplings_;
  double left_boundary_;
  std::optional<PeriodHint> period_;
};

/// Transfer across one interface: (u, u')(t+) = T (u, u')(t-).
/// Throws Decoupled when m is separating (the interface has no transfer matrix).
TransferMatrix interface_transfer(const InterfaceCoupling& m, double tol = 1e-9);

/// Transfer across a free interval of positive length at energy z.
TransferMatrix free_transfer(double length, complex z);

/// Ordered product of free and interface transfers over [from, to].
/// Neither endpoint may be an interaction point.
TransferMatrix propagate(const HalflineSystem& sys, complex z, double from, double to);

/// Transfer across one period, starting just left of the first periodic point.
TransferMatrix monodromy(const HalflineSystem& sys, complex z);

/// Transfer over [x, x + L] of the two-sided periodic extension of the
/// periodic part of sys (L the period length). x must not be an interaction point.
TransferMatrix periodic_transfer_at(const HalflineSystem& sys, complex z, double x);

}  // namespace treespec
