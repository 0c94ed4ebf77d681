#include "treespec/tree.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "treespec/errors.hpp"

namespace treespec {

Eigen::MatrixXcd zero_sum_basis(int branching, ZeroSumBasis kind) {
  const Eigen::Index b = branching;
  Eigen::MatrixXcd v(b - 1, b);
  if (b <= 1) return v;
  if (kind == ZeroSumBasis::fourier) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(b));
    for (Eigen::Index s = 1; s < b; ++s) {
      for (Eigen::Index j = 0; j < b; ++j) {
        // Reduce s j mod b first so the phase stays exact for large products.
        const double phase = 2.0 * kPi * static_cast<double>((s * j) % b) / static_cast<double>(b);
        v(s - 1, j) = std::polar(norm, phase);
      }
    }
    return v;
  }
  for (Eigen::Index r = 0; r < b - 1; ++r) {
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(b);
    row(r) = 1.0;
    row(b - 1) = -1.0;
    for (Eigen::Index k = 0; k < r; ++k) {
      const Eigen::VectorXcd prev = v.row(k).transpose();
      row -= prev.dot(row) * prev;
    }
    v.row(r) = row.normalized().transpose();
  }
  return v;
}

std::size_t edge_count(const RadialTreeSpec& spec, std::size_t depth) {
  std::size_t total = 0;
  for (std::size_t n = 0; n < depth; ++n) total += vertex_count(spec, n + 1);
  return total;
}

namespace {

void check_depth(const RadialTreeSpec& spec, std::size_t depth) {
  if (depth == 0) throw Error(ErrorKind::invalid_argument, "tree: depth must be >= 1");
  if (spec.gaps.size() < depth) {
    throw Error(ErrorKind::invalid_argument, "tree: depth " + std::to_string(depth) + " needs " +
                                                 std::to_string(depth) + " gaps");
  }
  if (spec.couplings.size() + 1 < depth) {
    throw Error(ErrorKind::invalid_argument, "tree: depth " + std::to_string(depth) + " needs couplings for generations 1.." +
                                                 std::to_string(depth - 1));
  }
}

}  // namespace

Eigen::MatrixXcd assemble_secular(const RadialTreeSpec& spec, std::size_t depth, double energy,
                                  const SecularOptions& opts) {
  check_depth(spec, depth);
  const std::size_t edges = edge_count(spec, depth);
  const auto unknowns = static_cast<Eigen::Index>(2 * edges);
  if (2 * edges > opts.max_unknowns) {
    throw Error(ErrorKind::depth_too_large, "tree: " + std::to_string(2 * edges) + " unknowns exceed the cap of " +
                                                std::to_string(opts.max_unknowns));
  }

  // Offsets of each edge level in the unknown vector.
  std::vector<std::size_t> level_offset(depth + 1, 0);
  for (std::size_t n = 0; n < depth; ++n) level_offset[n + 1] = level_offset[n] + vertex_count(spec, n + 1);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(unknowns, unknowns);
  Eigen::Index row = 0;
  auto col_a = [](std::size_t e) { return static_cast<Eigen::Index>(2 * e); };
  auto col_b = [](std::size_t e) { return static_cast<Eigen::Index>(2 * e + 1); };

  // Root: sin(theta) f(O) + cos(theta) f'(O) = 0.
  {
    const bool dirichlet = spec.root_angle == kDirichlet;
    m(row, col_a(0)) = dirichlet ? 1.0 : std::sin(spec.root_angle);
    m(row, col_b(0)) = dirichlet ? 0.0 : std::cos(spec.root_angle);
    ++row;
  }

  for (std::size_t n = 1; n < depth; ++n) {
    const VertexCoupling& c = spec.coupling(n);
    const int b = c.branching;
    const double inv_b = 1.0 / b;
    const TransferMatrix f = free_transfer(spec.gaps[n - 1], complex(energy, 0.0));
    const Eigen::MatrixXcd v = zero_sum_basis(b, opts.basis);
    const complex half_gamma = 0.5 * c.gamma;
    const complex half_gamma_bar = std::conj(half_gamma);

    const std::size_t incoming = vertex_count(spec, n);
    for (std::size_t i = 0; i < incoming; ++i) {
      const std::size_t in = level_offset[n - 1] + i;
      const std::size_t first_out = level_offset[n] + i * static_cast<std::size_t>(b);

      // Sum of outgoing derivatives minus incoming derivative, delta part and gamma part.
      const complex fm_coef1 = -0.5 * c.alpha;
      const complex fpm_coef1 = -(1.0 + half_gamma);
      m(row, col_a(in)) = fm_coef1 * f(0, 0) + fpm_coef1 * f(1, 0);
      m(row, col_b(in)) = fm_coef1 * f(0, 1) + fpm_coef1 * f(1, 1);
      for (int j = 0; j < b; ++j) {
        m(row, col_a(first_out + j)) = -0.5 * c.alpha * inv_b;
        m(row, col_b(first_out + j)) = 1.0 - half_gamma;
      }
      ++row;

      // Mean outgoing value minus incoming value, delta-prime part and gamma part.
      const complex fm_coef2 = -1.0 + half_gamma_bar;
      const complex fpm_coef2 = -0.5 * c.beta;
      m(row, col_a(in)) = fm_coef2 * f(0, 0) + fpm_coef2 * f(1, 0);
      m(row, col_b(in)) = fm_coef2 * f(0, 1) + fpm_coef2 * f(1, 1);
      for (int j = 0; j < b; ++j) {
        m(row, col_a(first_out + j)) = (1.0 + half_gamma_bar) * inv_b;
        m(row, col_b(first_out + j)) = -0.5 * c.beta;
      }
      ++row;

      // (U - I) V f+ + i (U + I) V f+' = 0 with U diagonal in the chosen basis.
      for (int s = 0; s < b - 1; ++s) {
        const complex u = std::polar(1.0, c.eigenphases[static_cast<std::size_t>(s)]);
        for (int j = 0; j < b; ++j) {
          m(row, col_a(first_out + j)) = (u - 1.0) * v(s, j);
          m(row, col_b(first_out + j)) = complex(0.0, 1.0) * (u + 1.0) * v(s, j);
        }
        ++row;
      }
    }
  }

  // Dirichlet at the cut.
  const TransferMatrix last = free_transfer(spec.gaps[depth - 1], complex(energy, 0.0));
  for (std::size_t e = level_offset[depth - 1]; e < level_offset[depth]; ++e) {
    m(row, col_a(e)) = last(0, 0);
    m(row, col_b(e)) = last(0, 1);
    ++row;
  }

  if (row != unknowns) {
    throw Error(ErrorKind::invalid_argument, "tree: secular system is not square");
  }
  for (Eigen::Index r = 0; r < unknowns; ++r) {
    const double nrm = m.row(r).norm();
    if (nrm > 0.0) m.row(r) /= nrm;
  }
  return m;
}

Eigen::VectorXd secular_singular_values(const RadialTreeSpec& spec, std::size_t depth, double energy,
                                        const SecularOptions& opts) {
  const Eigen::MatrixXcd m = assemble_secular(spec, depth, energy, opts);
  // BDCSVD loses relative accuracy in the smallest singular values here.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues();
}

double secular_sigma_min(const RadialTreeSpec& spec, std::size_t depth, double energy, const SecularOptions& opts) {
  const Eigen::VectorXd sv = secular_singular_values(spec, depth, energy, opts);
  return sv(sv.size() - 1);
}

namespace {

double relative_sigma_min(const RadialTreeSpec& spec, std::size_t depth, double energy, const SecularOptions& opts) {
  const Eigen::VectorXd sv = secular_singular_values(spec, depth, energy, opts);
  return sv(sv.size() - 1) / sv(0);
}

// Coarse version for the grid scan: much faster, only locates brackets.
double coarse_sigma_min(const RadialTreeSpec& spec, std::size_t depth, double energy, const SecularOptions& opts) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(assemble_secular(spec, depth, energy, opts));
  const Eigen::VectorXd& sv = svd.singularValues();
  return sv(sv.size() - 1) / sv(0);
}

template <class F>
double golden_section(double lo, double hi, F&& f, double width) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > width) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

std::vector<TreeEigenvalue> tree_eigenvalues(const RadialTreeSpec& spec, std::size_t depth, Window window,
                                             const TreeEigenOptions& opts) {
  check_depth(spec, depth);
  spec.validate();
  const std::vector<double> grid = momentum_grid(window, opts.points_per_unit);
  auto coarse = [&](double e) { return coarse_sigma_min(spec, depth, e, opts.secular); };
  auto s = [&](double e) { return relative_sigma_min(spec, depth, e, opts.secular); };
  const std::vector<double> vals = evaluate_on_grid<double>(grid, coarse, opts.exec);

  std::vector<TreeEigenvalue> out;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || vals[i] < vals[i - 1];
    const bool right_ok = i + 1 == n || vals[i] <= vals[i + 1];
    if (!left_ok || !right_ok) continue;
    const double lo = i == 0 ? grid[0] : grid[i - 1];
    const double hi = i + 1 == n ? grid[n - 1] : grid[i + 1];
    const double e = golden_section(lo, hi, s, opts.width);
    if (!window.contains(e)) continue;
    const Eigen::VectorXd sv = secular_singular_values(spec, depth, e, opts.secular);
    const double threshold = opts.sigma_tol * sv(0);
    if (!(sv(sv.size() - 1) < threshold)) continue;
    std::size_t mult = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) mult += sv(k) < threshold ? 1 : 0;
    if (!out.empty() && std::abs(out.back().energy - e) < 10 * opts.width) continue;
    out.push_back({e, mult});
  }
  return out;
}

std::vector<Component> direct_sum_components(const RadialTreeSpec& spec, std::size_t depth) {
  check_depth(spec, depth);
  std::vector<Component> out;
  out.push_back({0, 0, spec.root_angle, 1});
  for (std::size_t n = 1; n < depth; ++n) {
    const VertexCoupling& c = spec.coupling(n);
    const std::size_t mult = vertex_count(spec, n);
    for (std::size_t s = 1; s < static_cast<std::size_t>(c.branching); ++s) {
      // g' + tan(theta/2) g = 0 for the U-eigenvalue exp(i theta).
      const double angle = 0.5 * c.eigenphases[s - 1];
      out.push_back({n, s, angle, mult});
    }
  }
  return out;
}

HalflineSystem component_system(const RadialTreeSpec& spec, std::size_t depth, const Component& comp) {
  check_depth(spec, depth);
  std::vector<double> points;
  std::vector<InterfaceCoupling> couplings;
  for (std::size_t g = comp.generation + 1; g < depth; ++g) {
    points.push_back(spec.distance(g));
    try {
      couplings.push_back(reduce_coupling(spec.coupling(g)));
    } catch (const Error& e) {
      throw e.at_generation(g);
    }
  }
  return HalflineSystem(spec.distance(comp.generation), std::move(points), std::move(couplings), comp.left_angle);
}

std::vector<TreeEigenvalue> halfline_direct_sum_eigenvalues(const RadialTreeSpec& spec, std::size_t depth,
                                                            Window window, const EigenOptions& opts) {
  spec.validate();
  const double right_end = spec.distance(depth);
  std::vector<TreeEigenvalue> all;
  for (const Component& comp : direct_sum_components(spec, depth)) {
    const HalflineSystem sys = component_system(spec, depth, comp);
    std::vector<double> es;
    try {
      es = halfline_eigenvalues(sys, right_end, window, opts);
    } catch (const Error& e) {
      if (e.generation()) throw e.at_generation(*e.generation() + comp.generation);
      throw;
    }
    for (double e : es) all.push_back({e, comp.multiplicity});
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.energy < y.energy; });
  std::vector<TreeEigenvalue> merged;
  for (const TreeEigenvalue& ev : all) {
    if (!merged.empty() && std::abs(merged.back().energy - ev.energy) <= 1e-9) {
      merged.back().multiplicity += ev.multiplicity;
    } else {
      merged.push_back(ev);
    }
  }
  return merged;
}

namespace {

std::vector<double> expand(const std::vector<TreeEigenvalue>& evs) {
  std::vector<double> out;
  for (const TreeEigenvalue& ev : evs) out.insert(out.end(), ev.multiplicity, ev.energy);
  return out;
}

}  // namespace

SpectralComparison compare_spectra(const RadialTreeSpec& spec, std::size_t depth, Window window, double tol,
                                   const TreeEigenOptions& tree_opts, const EigenOptions& halfline_opts) {
  SpectralComparison cmp;
  cmp.window = window;
  cmp.tol = tol;
  cmp.tree = tree_eigenvalues(spec, depth, window, tree_opts);
  cmp.direct_sum = halfline_direct_sum_eigenvalues(spec, depth, window, halfline_opts);
  const std::vector<double> a = expand(cmp.tree);
  const std::vector<double> b = expand(cmp.direct_sum);
  cmp.tree_count = a.size();
  cmp.direct_sum_count = b.size();

  // Greedy nearest matching: repeatedly take the closest unmatched pair.
  struct Candidate {
    double dist;
    std::size_t i, j;
  };
  std::vector<Candidate> cands;
  cands.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) cands.push_back({std::abs(a[i] - b[j]), i, j});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    return x.dist < y.dist || (x.dist == y.dist && (x.i < y.i || (x.i == y.i && x.j < y.j)));
  });
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  for (const Candidate& c : cands) {
    if (used_a[c.i] || used_b[c.j]) continue;
    used_a[c.i] = used_b[c.j] = true;
    cmp.matched.emplace_back(a[c.i], b[c.j]);
    cmp.max_mismatch = std::max(cmp.max_mismatch, c.dist);
  }
  std::sort(cmp.matched.begin(), cmp.matched.end());
  cmp.pass = a.size() == b.size() && cmp.max_mismatch <= tol;
  return cmp;
}

std::size_t component_multiplicity_total(const RadialTreeSpec& spec, std::size_t depth) {
  std::size_t total = 0;
  for (const Component& c : direct_sum_components(spec, depth)) total += c.multiplicity;
  return total;
}

}  // namespace treespec
