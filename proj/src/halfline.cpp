#include "treespec/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treespec/errors.hpp"

namespace treespec {

HalflineSystem::HalflineSystem(double origin, std::vector<double> points, std::vector<InterfaceCoupling> couplings,
                               double left_boundary, std::optional<PeriodHint> period)
    : origin_(origin),
      points_(std::move(points)),
      couplings_(std::move(couplings)),
      left_boundary_(left_boundary),
      period_(period) {
  if (!std::isfinite(origin_)) throw Error(ErrorKind::invalid_argument, "halfline origin must be finite");
  if (points_.size() != couplings_.size()) {
    throw Error(ErrorKind::invalid_argument, "halfline: points and couplings differ in length");
  }
  double prev = origin_;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k]) || !(points_[k] > prev)) {
      throw Error(ErrorKind::invalid_argument, "halfline: points must be finite, strictly increasing and > origin", k + 1);
    }
    prev = points_[k];
    try {
      couplings_[k].validate();
    } catch (const Error& e) {
      throw e.at_generation(k + 1);
    }
  }
  if (!(left_boundary_ > -kPi / 2 && left_boundary_ <= kPi / 2)) {
    throw Error(ErrorKind::invalid_argument, "halfline: left boundary angle must lie in (-pi/2, pi/2]");
  }
  if (period_) {
    const auto [p, q] = *period_;
    if (q == 0) throw Error(ErrorKind::invalid_argument, "halfline: period length must be positive");
    if (points_.size() < p + q + 1) {
      throw Error(ErrorKind::invalid_argument, "halfline: periodic system must store points 0..preperiod+length");
    }
    // Stored points past the first period must agree with the periodic continuation.
    const double len = period_length();
    for (std::size_t k = p + q; k < points_.size(); ++k) {
      const std::size_t r = (k - p) % q;
      const double m = static_cast<double>((k - p) / q);
      const double expect = points_[p + r] + m * len;
      const bool same_pos = std::abs(points_[k] - expect) <= 1e-12 * std::max(1.0, std::abs(expect));
      const InterfaceCoupling& a = couplings_[k];
      const InterfaceCoupling& b = couplings_[p + r];
      const bool same_coupling = std::abs(a.a - b.a) <= 1e-12 && std::abs(a.q - b.q) <= 1e-12 &&
                                 std::abs(a.c - b.c) <= 1e-12;
      if (!same_pos || !same_coupling) {
        throw Error(ErrorKind::invalid_argument, "halfline: stored points contradict the period hint", k + 1);
      }
    }
  }
}

HalflineSystem HalflineSystem::periodic(double origin, double first_point, std::vector<double> cell_offsets,
                                        std::vector<InterfaceCoupling> cell, double period_length,
                                        double left_boundary) {
  if (cell.empty() || cell.size() != cell_offsets.size()) {
    throw Error(ErrorKind::invalid_argument, "periodic halfline: cell must be nonempty and aligned with offsets");
  }
  if (cell_offsets.front() != 0.0 || !(cell_offsets.back() < period_length)) {
    throw Error(ErrorKind::invalid_argument, "periodic halfline: offsets must start at 0 and stay below the period");
  }
  std::vector<double> points;
  std::vector<InterfaceCoupling> couplings;
  for (std::size_t j = 0; j < cell.size(); ++j) {
    points.push_back(first_point + cell_offsets[j]);
    couplings.push_back(cell[j]);
  }
  points.push_back(first_point + period_length);
  couplings.push_back(cell.front());
  return HalflineSystem(origin, std::move(points), std::move(couplings), left_boundary,
                        PeriodHint{0, cell.size()});
}

HalflineSystem HalflineSystem::chain(const InterfaceCoupling& m, double spacing, double origin, double left_boundary) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::invalid_argument, "chain: spacing must be positive");
  return periodic(origin, origin + spacing, {0.0}, {m}, spacing, left_boundary);
}

double HalflineSystem::period_length() const {
  if (!period_) throw Error(ErrorKind::no_period, "halfline system carries no period hint");
  return points_[period_->preperiod + period_->length] - points_[period_->preperiod];
}

std::size_t HalflineSystem::site_count() const {
  return period_ ? std::numeric_limits<std::size_t>::max() : points_.size();
}

Site HalflineSystem::site(std::size_t k) const {
  if (k < points_.size()) return {points_[k], couplings_[k]};
  if (!period_) throw Error(ErrorKind::invalid_argument, "halfline: interaction point index out of range");
  const auto [p, q] = *period_;
  const std::size_t r = (k - p) % q;
  const double m = static_cast<double>((k - p) / q);
  return {points_[p + r] + m * period_length(), couplings_[p + r]};
}

std::size_t HalflineSystem::first_site_after(double x) const {
  if (points_.empty() || x < points_.back() || !period_) {
    return static_cast<std::size_t>(std::upper_bound(points_.begin(), points_.end(), x) - points_.begin());
  }
  const auto [p, q] = *period_;
  const double len = period_length();
  const double m = std::floor((x - points_[p]) / len);
  std::size_t k = p + static_cast<std::size_t>(std::max(0.0, m)) * q;
  // Settle rounding in the estimate by stepping.
  while (k > 0 && site(k - 1).position > x) --k;
  while (site(k).position <= x) ++k;
  return k;
}

HalflineSystem HalflineSystem::shifted(double s) const {
  std::vector<double> pts = points_;
  for (double& t : pts) t += s;
  return HalflineSystem(origin_ + s, std::move(pts), couplings_, left_boundary_, period_);
}

TransferMatrix interface_transfer(const InterfaceCoupling& m, double tol) {
  if (is_separating(m, tol)) {
    throw Error(ErrorKind::decoupled, "interface_transfer: separating coupling decouples the halfline");
  }
  // Solving the interface conditions for (u, u')(t+) gives T = M^{-1} N with
  // M = [[1 + conj(c)/2, -q/2], [-a/2, 1 - c/2]], N = [[1 - conj(c)/2, q/2], [a/2, 1 + c/2]].
  const double aq4 = 0.25 * m.a * m.q;
  const complex det_m(1.0 - aq4 - 0.25 * std::norm(m.c), -m.c.imag());
  TransferMatrix t;
  t(0, 0) = std::norm(1.0 - 0.5 * m.c) + aq4;
  t(0, 1) = m.q;
  t(1, 0) = m.a;
  t(1, 1) = std::norm(1.0 + 0.5 * m.c) + aq4;
  if (m.c.imag() == 0.0) {
    t /= det_m.real();
  } else {
    t /= det_m;
  }
  return t;
}

namespace {

// cos(sqrt w), sin(sqrt w)/sqrt w for small |w|.
template <class T>
void small_series(T w, T& cosine, T& sinc) {
  cosine = T(1) - w / T(2) * (T(1) - w / T(12) * (T(1) - w / T(30)));
  sinc = T(1) - w / T(6) * (T(1) - w / T(20) * (T(1) - w / T(42)));
}

constexpr double kSeriesCutoff = 1e-8;  // |k l|^2

}  // namespace

TransferMatrix free_transfer(double length, complex z) {
  if (!(length > 0.0)) throw Error(ErrorKind::invalid_argument, "free_transfer: length must be positive");
  TransferMatrix f;
  if (z.imag() == 0.0) {
    const double e = z.real();
    const double w = e * length * length;
    double c, s_over_k, ks;  // cos(kl), sin(kl)/k, k sin(kl)
    if (std::abs(w) < kSeriesCutoff) {
      double sinc;
      small_series(w, c, sinc);
      s_over_k = length * sinc;
      ks = e * length * sinc;
    } else if (e > 0.0) {
      const double k = std::sqrt(e);
      c = std::cos(k * length);
      const double sn = std::sin(k * length);
      s_over_k = sn / k;
      ks = k * sn;
    } else {
      const double kappa = std::sqrt(-e);
      c = std::cosh(kappa * length);
      const double sh = std::sinh(kappa * length);
      s_over_k = sh / kappa;
      ks = -kappa * sh;
    }
    f << c, s_over_k, -ks, c;
    return f;
  }
  const complex w = z * length * length;
  complex c, s_over_k, ks;
  if (std::abs(w) < kSeriesCutoff) {
    complex sinc;
    small_series(w, c, sinc);
    s_over_k = length * sinc;
    ks = z * length * sinc;
  } else {
    const complex k = std::sqrt(z);
    c = std::cos(k * length);
    const complex sn = std::sin(k * length);
    s_over_k = sn / k;
    ks = k * sn;
  }
  f << c, s_over_k, -ks, c;
  return f;
}

TransferMatrix propagate(const HalflineSystem& sys, complex z, double from, double to) {
  if (!(from >= sys.origin()) || !(to > from)) {
    throw Error(ErrorKind::invalid_argument, "propagate: need origin <= from < to");
  }
  const std::size_t first = sys.first_site_after(from);
  if (first > 0 && sys.site(first - 1).position == from) {
    throw Error(ErrorKind::invalid_argument, "propagate: endpoint coincides with an interaction point", first);
  }
  TransferMatrix p = TransferMatrix::Identity();
  double x = from;
  for (std::size_t k = first; k < sys.site_count(); ++k) {
    const Site s = sys.site(k);
    if (s.position > to) break;
    if (s.position == to) {
      throw Error(ErrorKind::invalid_argument, "propagate: endpoint coincides with an interaction point", k + 1);
    }
    p = free_transfer(s.position - x, z) * p;
    try {
      p = interface_transfer(s.coupling) * p;
    } catch (const Error& e) {
      throw e.at_generation(k + 1);
    }
    x = s.position;
  }
  return free_transfer(to - x, z) * p;
}

TransferMatrix monodromy(const HalflineSystem& sys, complex z) {
  if (!sys.period()) throw Error(ErrorKind::no_period, "monodromy: halfline system carries no period hint");
  const auto [p, q] = *sys.period();
  TransferMatrix m = TransferMatrix::Identity();
  for (std::size_t j = 0; j < q; ++j) {
    const std::size_t k = p + j;
    try {
      m = interface_transfer(sys.couplings()[k]) * m;
    } catch (const Error& e) {
      throw e.at_generation(k + 1);
    }
    m = free_transfer(sys.points()[k + 1] - sys.points()[k], z) * m;
  }
  return m;
}

TransferMatrix periodic_transfer_at(const HalflineSystem& sys, complex z, double x) {
  if (!sys.period()) throw Error(ErrorKind::no_period, "periodic_transfer_at: halfline system carries no period hint");
  const auto [p, q] = *sys.period();
  const double len = sys.period_length();
  const double base = sys.points()[p];

  struct Hit {
    double position;
    std::size_t index;
  };
  std::vector<Hit> hits;
  for (std::size_t j = 0; j < q; ++j) {
    const double offset = sys.points()[p + j] - base;
    double m = std::ceil((x - base - offset) / len);
    double pos = base + offset + m * len;
    if (pos == x) throw Error(ErrorKind::invalid_argument, "periodic_transfer_at: basepoint is an interaction point");
    if (pos < x) pos = base + offset + (m + 1.0) * len;
    hits.push_back({pos, p + j});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.position < b.position; });

  TransferMatrix m = TransferMatrix::Identity();
  double at = x;
  for (const Hit& h : hits) {
    m = free_transfer(h.position - at, z) * m;
    try {
      m = interface_transfer(sys.couplings()[h.index]) * m;
    } catch (const Error& e) {
      throw e.at_generation(h.index + 1);
    }
    at = h.position;
  }
  return free_transfer(x + len - at, z) * m;
}

}  // namespace treespec
