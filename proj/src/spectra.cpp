#include "treespec/spectra.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "treespec/errors.hpp"

namespace treespec {

std::array<complex, 2> eigenvalues(const TransferMatrix& m) {
  const complex tr = m.trace();
  const complex det = m.determinant();
  const complex disc = std::sqrt(tr * tr - 4.0 * det);
  // Larger-magnitude root first, the other from the product to avoid cancellation.
  const complex big = std::abs(tr + disc) >= std::abs(tr - disc) ? 0.5 * (tr + disc) : 0.5 * (tr - disc);
  if (big == complex(0.0)) return {complex(0.0), complex(0.0)};
  return {big, det / big};
}

bool in_band_unit_circle(const TransferMatrix& monodromy, double tol) {
  const auto ev = eigenvalues(monodromy);
  return std::abs(std::abs(ev[0]) - 1.0) <= tol || std::abs(std::abs(ev[1]) - 1.0) <= tol;
}

bool in_band_trace(const TransferMatrix& monodromy) { return std::abs(monodromy.trace().real()) <= 2.0; }

bool trace_test_applies(const TransferMatrix& monodromy, double tol) {
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (monodromy.data()[i].imag() != 0.0) return false;
  }
  return std::abs(monodromy.determinant() - complex(1.0)) <= tol;
}

namespace {

struct Classified {
  bool band = false;
  bool checked = false;
  bool disagree = false;
};

}  // namespace

BandStructure band_structure(const HalflineSystem& sys, Window window, const BandOptions& opts) {
  if (!sys.is_periodic()) throw Error(ErrorKind::no_period, "band_structure: halfline system carries no period hint");
  const std::vector<double> grid = linear_grid(window, opts.grid_points);
  auto classify = [&](double e) {
    const TransferMatrix m = monodromy(sys, complex(e, 0.0));
    Classified c;
    c.band = in_band_unit_circle(m, opts.unit_tol);
    if (trace_test_applies(m)) {
      c.checked = true;
      c.disagree = c.band != in_band_trace(m);
    }
    return c;
  };
  const std::vector<Classified> cls = evaluate_on_grid<Classified>(grid, classify, opts.exec);

  BandStructure out;
  out.window = window;
  out.grid_points = grid.size();
  for (const Classified& c : cls) {
    out.trace_checked += c.checked ? 1 : 0;
    out.classifier_disagreements += c.disagree ? 1 : 0;
  }

  auto in_band = [&](double e) { return in_band_unit_circle(monodromy(sys, complex(e, 0.0)), opts.unit_tol); };
  std::size_t i = 0;
  while (i < grid.size()) {
    if (!cls[i].band) {
      ++i;
      continue;
    }
    Band b;
    b.lower = i == 0 ? window.lower : bisect_predicate(grid[i - 1], grid[i], in_band, opts.edge_tol);
    std::size_t j = i;
    while (j + 1 < grid.size() && cls[j + 1].band) ++j;
    b.upper = j + 1 == grid.size() ? window.upper : bisect_predicate(grid[j], grid[j + 1], in_band, opts.edge_tol);
    out.bands.push_back(b);
    i = j + 1;
  }
  return out;
}

namespace {

struct FloquetRatios {
  complex decaying;  // v2 / v1 for |lambda| < 1
  complex growing;   // v2 / v1 for |lambda| > 1
};

complex eigen_ratio(const TransferMatrix& m, complex lambda) {
  // Two candidate eigenvectors; take the better conditioned one.
  const complex a1 = m(0, 1), a2 = lambda - m(0, 0);
  const complex b1 = lambda - m(1, 1), b2 = m(1, 0);
  const bool use_a = std::norm(a1) + std::norm(a2) >= std::norm(b1) + std::norm(b2);
  const complex v1 = use_a ? a1 : b1;
  const complex v2 = use_a ? a2 : b2;
  if (v1 == complex(0.0)) {
    throw Error(ErrorKind::degenerate_floquet, "weyl_m: Floquet solution vanishes at the basepoint");
  }
  return v2 / v1;
}

FloquetRatios floquet_ratios(const TransferMatrix& m) {
  const auto ev = eigenvalues(m);
  if (std::abs(ev[0] - ev[1]) <= 1e-12) {
    throw Error(ErrorKind::degenerate_floquet, "weyl_m: monodromy eigenvalues coincide");
  }
  const bool first_small = std::abs(ev[0]) < std::abs(ev[1]);
  const complex small = first_small ? ev[0] : ev[1];
  const complex large = first_small ? ev[1] : ev[0];
  return {eigen_ratio(m, small), eigen_ratio(m, large)};
}

// Left end of the region in which the actual system to the right coincides
// with the periodic extension.
double periodic_region_start(const HalflineSystem& sys) {
  const auto [p, q] = *sys.period();
  const double prev = p == 0 ? sys.origin() : sys.points()[p - 1];
  return std::max(prev, sys.points()[p + q - 1] - sys.period_length());
}

}  // namespace

double default_basepoint(const HalflineSystem& sys) {
  if (!sys.is_periodic()) throw Error(ErrorKind::no_period, "default_basepoint: halfline system carries no period hint");
  return 0.5 * (periodic_region_start(sys) + sys.points()[sys.period()->preperiod]);
}

WeylValue weyl_m(const HalflineSystem& sys, complex z, double basepoint) {
  if (!(z.imag() > 0.0)) throw Error(ErrorKind::invalid_argument, "weyl_m: need Im z > 0");
  if (!sys.is_periodic()) throw Error(ErrorKind::no_period, "weyl_m: halfline system carries no period hint");
  if (basepoint < sys.origin()) throw Error(ErrorKind::invalid_argument, "weyl_m: basepoint left of the origin");

  WeylValue w;
  w.basepoint = basepoint;
  w.energy = z;
  const FloquetRatios here = floquet_ratios(periodic_transfer_at(sys, z, basepoint));
  w.m_minus = -here.growing;

  const double start = periodic_region_start(sys);
  if (basepoint > start) {
    w.m_plus = here.decaying;
  } else {
    // Carry the decaying solution back through the non-periodic part.
    const double ref = 0.5 * (start + sys.points()[sys.period()->preperiod]);
    const complex ratio = floquet_ratios(periodic_transfer_at(sys, z, ref)).decaying;
    const Eigen::Vector2cd at_ref(1.0, ratio);
    const Eigen::Vector2cd at_base = propagate(sys, z, basepoint, ref).inverse() * at_ref;
    if (at_base(0) == complex(0.0)) {
      throw Error(ErrorKind::degenerate_floquet, "weyl_m: decaying solution vanishes at the basepoint");
    }
    w.m_plus = at_base(1) / at_base(0);
  }
  return w;
}

namespace {

// Neville extrapolation of samples (x_i, y_i) to x = 0.
complex extrapolate_to_zero(const std::vector<double>& xs, std::vector<complex> ys) {
  const std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double xi = xs[i], xj = xs[i + level];
      ys[i] = (xj * ys[i] - xi * ys[i + 1]) / (xj - xi);
    }
  }
  return ys[0];
}

}  // namespace

WeylValue weyl_m_boundary(const HalflineSystem& sys, double energy, double basepoint, const std::vector<double>& etas) {
  if (etas.empty()) throw Error(ErrorKind::invalid_argument, "weyl_m_boundary: need at least one eta");
  std::vector<complex> plus, minus;
  for (double eta : etas) {
    const WeylValue w = weyl_m(sys, complex(energy, eta), basepoint);
    plus.push_back(w.m_plus);
    minus.push_back(w.m_minus);
  }
  WeylValue out;
  out.basepoint = basepoint;
  out.energy = complex(energy, 0.0);
  out.m_plus = extrapolate_to_zero(etas, plus);
  out.m_minus = extrapolate_to_zero(etas, minus);
  return out;
}

double reflectionless_defect(const HalflineSystem& sys, double energy, double eta, double basepoint) {
  if (!(eta > 0.0)) throw Error(ErrorKind::invalid_argument, "reflectionless_defect: eta must be positive");
  const WeylValue w = weyl_m(sys, complex(energy, eta), basepoint);
  return std::abs(w.m_plus + std::conj(w.m_minus));
}

double reflectionless_defect_limit(const HalflineSystem& sys, double energy, double basepoint) {
  const WeylValue w = weyl_m_boundary(sys, energy, basepoint);
  return std::abs(w.m_plus + std::conj(w.m_minus));
}

double shooting_value(const HalflineSystem& sys, double right_end, double energy) {
  const double theta = sys.left_boundary();
  const Eigen::Vector2cd start(std::cos(theta), -std::sin(theta));
  const Eigen::Vector2cd end = propagate(sys, complex(energy, 0.0), sys.origin(), right_end) * start;
  return end(0).real();
}

std::vector<double> halfline_eigenvalues(const HalflineSystem& sys, double right_end, Window window,
                                         const EigenOptions& opts) {
  if (!(right_end > sys.origin())) throw Error(ErrorKind::invalid_argument, "halfline_eigenvalues: right end <= origin");
  for (std::size_t k = 0; k < sys.site_count(); ++k) {
    const Site s = sys.site(k);
    if (s.position >= right_end) break;
    if (s.coupling.c.imag() != 0.0) {
      throw Error(ErrorKind::complex_coupling_unsupported,
                  "halfline_eigenvalues: interface with Im c != 0 (real shooting only)", k + 1);
    }
  }

  const std::vector<double> grid = momentum_grid(window, opts.points_per_unit);
  auto f = [&](double e) { return shooting_value(sys, right_end, e); };
  const std::vector<double> vals = evaluate_on_grid<double>(grid, f, opts.exec);

  std::vector<double> roots;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (vals[i] == 0.0) {
      roots.push_back(grid[i]);
      continue;
    }
    if (i + 1 < grid.size() && vals[i + 1] != 0.0 && std::signbit(vals[i]) != std::signbit(vals[i + 1])) {
      const bool neg_at_lower = std::signbit(vals[i]);
      roots.push_back(bisect_predicate(
          grid[i], grid[i + 1], [&](double e) { return std::signbit(f(e)) == neg_at_lower; }, opts.root_tol));
    }
  }
  return roots;
}

LyapunovEstimate lyapunov_exponent(const HalflineSystem& sys, double energy, std::size_t n_points) {
  if (n_points == 0) throw Error(ErrorKind::invalid_argument, "lyapunov_exponent: need at least one point");
  if (n_points > sys.site_count()) {
    throw Error(ErrorKind::invalid_argument, "lyapunov_exponent: system has fewer interaction points than requested");
  }
  const complex z(energy, 0.0);
  TransferMatrix p = TransferMatrix::Identity();
  double log_scale = 0.0;
  double x = sys.origin();
  double cached_gap = -1.0;
  TransferMatrix cached_free;
  for (std::size_t k = 0; k < n_points; ++k) {
    const Site s = sys.site(k);
    const double gap = s.position - x;
    if (gap != cached_gap) {
      cached_free = free_transfer(gap, z);
      cached_gap = gap;
    }
    TransferMatrix step;
    try {
      step = interface_transfer(s.coupling) * cached_free;
    } catch (const Error& e) {
      throw e.at_generation(k + 1);
    }
    p = step * p;
    x = s.position;
    if ((k & 31u) == 31u) {
      const double nrm = p.norm();
      p /= nrm;
      log_scale += std::log(nrm);
    }
  }
  // Spectral norm of a 2x2 matrix from its Frobenius norm and determinant.
  const double f2 = p.squaredNorm();
  const double det2 = std::norm(p.determinant());
  const double spectral = std::sqrt(0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det2))));
  LyapunovEstimate out;
  out.points = n_points;
  out.length = x - sys.origin();
  out.exponent = (std::log(spectral) + log_scale) / out.length;
  return out;
}

}  // namespace treespec
