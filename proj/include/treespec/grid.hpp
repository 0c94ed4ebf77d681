#pragma once

// Energy grids and the data-parallel evaluation kernels every scan goes through.
//
// Each kernel has a serial reference (`serial::`) and an OpenMP version
// (`parallel::`). Both write result i from grid point i only, so their outputs
// are bitwise identical regardless of thread count; tests rely on that.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "treespec/errors.hpp"

namespace treespec {

struct Window {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double e) const { return e >= lower && e <= upper; }
  double width() const { return upper - lower; }
};

enum class Execution { serial, parallel };

/// `count` equispaced points on [lower, upper], endpoints included.
inline std::vector<double> linear_grid(Window w, std::size_t count) {
  if (count < 2 || !(w.upper > w.lower)) {
    throw Error(ErrorKind::invalid_argument, "linear_grid: need count >= 2 and a nonempty window");
  }
  std::vector<double> xs(count);
  const double h = w.width() / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) xs[i] = w.lower + h * static_cast<double>(i);
  xs.back() = w.upper;
  return xs;
}

/// Grid uniform in the signed momentum s = sign(E) sqrt|E|, with `per_unit`
/// points per unit of s. Eigenvalue spacings of free problems are uniform in
/// this variable, so one density serves the whole window.
inline std::vector<double> momentum_grid(Window w, double per_unit) {
  if (!(w.upper > w.lower) || !(per_unit > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "momentum_grid: need a nonempty window and positive density");
  }
  auto to_s = [](double e) { return std::copysign(std::sqrt(std::abs(e)), e); };
  auto to_e = [](double s) { return std::copysign(s * s, s); };
  const double s0 = to_s(w.lower);
  const double s1 = to_s(w.upper);
  const auto count = static_cast<std::size_t>(std::ceil(per_unit * (s1 - s0))) + 1;
  std::vector<double> es(std::max<std::size_t>(count, 2));
  const double h = (s1 - s0) / static_cast<double>(es.size() - 1);
  for (std::size_t i = 0; i < es.size(); ++i) es[i] = to_e(s0 + h * static_cast<double>(i));
  es.front() = w.lower;
  es.back() = w.upper;
  return es;
}

namespace serial {

template <class T, class F>
void evaluate(std::span<const double> xs, std::span<T> out, F&& f) {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
}

}  // namespace serial

namespace parallel {

// Exceptions cannot cross the OpenMP region; the one from the lowest grid
// index is rethrown so failures are reported deterministically.
template <class T, class F>
void evaluate(std::span<const double> xs, std::span<T> out, F&& f) {
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  std::exception_ptr first;
  std::ptrdiff_t first_index = n;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical(treespec_grid_error)
      {
        if (i < first_index) {
          first_index = i;
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace parallel

template <class T, class F>
std::vector<T> evaluate_on_grid(std::span<const double> xs, F&& f, Execution exec) {
  std::vector<T> out(xs.size());
  if (exec == Execution::parallel) {
    parallel::evaluate<T>(xs, std::span<T>(out), f);
  } else {
    serial::evaluate<T>(xs, std::span<T>(out), f);
  }
  return out;
}

/// Bisection on a predicate that is `at_lower` at `lo` and flips once before `hi`.
template <class P>
double bisect_predicate(double lo, double hi, P&& pred, double width) {
  const bool at_lower = pred(lo);
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid) == at_lower) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace treespec
