#include "treespec/cli.hpp"

#include <omp.h>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "treespec/conditions.hpp"
#include "treespec/errors.hpp"
#include "treespec/json_io.hpp"
#include "treespec/seqgen.hpp"
#include "treespec/spectra.hpp"
#include "treespec/tree.hpp"

namespace treespec::cli {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

// Rows of a CSV table; numbers are formatted when added.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

  Csv& row() {
    rows_.emplace_back();
    return *this;
  }
  Csv& add(const std::string& s) {
    rows_.back().push_back(s);
    return *this;
  }
  Csv& add(double x) { return add(format_number(x)); }
  Csv& add(std::size_t n) { return add(std::to_string(n)); }
  Csv& add(int n) { return add(std::to_string(n)); }
  Csv& add(bool b) { return add(std::string(b ? "true" : "false")); }
  Csv& add(complex z) { return add(z.real()).add(z.imag()); }

  std::string str() const {
    std::string out;
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) out += ',';
        out += csv_field(r[i]);
      }
      out += "\r\n";
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

struct Emitted {
  json doc;
  std::optional<Csv> csv;
  bool failed = false;  // a reproduction or comparison did not pass
};

Error invalid(const std::string& msg) { return Error(ErrorKind::invalid_argument, msg); }

double require_finite(std::optional<double> v, const char* name) {
  if (!v) throw invalid(std::string("--") + name + " is required for this command");
  if (!std::isfinite(*v)) throw invalid(std::string("--") + name + " must be finite");
  return *v;
}

Window window_of(const JobConfig& cfg, double default_lower) {
  const double lo = cfg.emin ? require_finite(cfg.emin, "emin") : default_lower;
  const double hi = require_finite(cfg.emax, "emax");
  if (!(lo < hi)) throw invalid("--emin must be smaller than --emax");
  return {lo, hi};
}

double positive(std::optional<double> v, double fallback, const char* name) {
  if (!v) return fallback;
  if (!std::isfinite(*v) || !(*v > 0.0)) throw invalid(std::string("--") + name + " must be positive");
  return *v;
}

std::size_t grid_count(const JobConfig& cfg, std::size_t fallback) {
  if (!cfg.grid) return fallback;
  const double g = *cfg.grid;
  if (!(g >= 2.0) || g != std::floor(g) || g > 1e8) throw invalid("--grid must be an integer >= 2 for this command");
  return static_cast<std::size_t>(g);
}

const json& input_of(const JobConfig& cfg, json& storage) {
  if (cfg.input) return *cfg.input;
  if (!cfg.input_path) throw invalid("--input is required for command " + cfg.command);
  std::ifstream in(*cfg.input_path);
  if (!in) throw invalid("cannot open input file " + *cfg.input_path);
  try {
    storage = json::parse(in);
  } catch (const json::parse_error& e) {
    throw invalid(std::string("malformed JSON input: ") + e.what());
  }
  return storage;
}

bool is_tree_spec(const json& j) { return j.is_object() && j.contains("generations"); }
bool is_halfline_spec(const json& j) { return j.is_object() && j.contains("interfaces"); }

RadialTreeSpec tree_input(const json& j) {
  if (!is_tree_spec(j)) throw invalid("input must be a tree spec with \"gaps\" and \"generations\"");
  return io::tree_spec_from_json(j);
}

HalflineSystem halfline_input(const json& j) {
  if (!is_halfline_spec(j)) throw invalid("input must be a halfline spec with \"points\" and \"interfaces\"");
  return io::halfline_from_json(j);
}

std::size_t depth_of(const JobConfig& cfg, const RadialTreeSpec& spec) {
  const std::size_t d = cfg.depth.value_or(spec.gaps.size());
  if (d == 0 || d > spec.gaps.size()) {
    throw invalid("--depth must lie in 1.." + std::to_string(spec.gaps.size()) + " for this spec");
  }
  return d;
}

// ---- commands ----

Emitted cmd_check(const JobConfig& cfg, const json& in) {
  const RadialTreeSpec spec = tree_input(in);
  ConditionOptions opts;
  if (cfg.tol) opts.tol = positive(cfg.tol, opts.tol, "tol");
  const std::size_t horizon = cfg.horizon.value_or(cfg.depth.value_or(spec.couplings.size()));
  const ConditionReport r = check_conditions(spec, horizon, opts);
  Emitted e{io::to_json(r), std::nullopt};
  Csv csv({"condition", "holds", "generations"});
  auto list = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
  };
  csv.row().add("a").add(r.finitely_many_values).add(list(r.unit_branching));
  csv.row().add("b").add(r.finitely_many_separating).add(list(r.separating));
  csv.row().add("c").add(r.denominator_nonzero).add(list(r.vanishing_denominator));
  std::vector<std::size_t> d = r.real_gamma;
  d.insert(d.end(), r.degenerate_fiber.begin(), r.degenerate_fiber.end());
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  csv.row().add("d").add(r.injective).add(list(d));
  csv.row().add("tau").add(r.gaps_bounded_below).add(format_number(r.tau));
  e.csv = std::move(csv);
  return e;
}

Emitted cmd_reduce(const JobConfig& cfg, const json& in) {
  CouplingTolerance tol;
  if (cfg.tol) tol.scalar = positive(cfg.tol, tol.scalar, "tol");
  std::vector<VertexCoupling> couplings;
  if (is_tree_spec(in)) {
    couplings = tree_input(in).couplings;
  } else if (in.is_array()) {
    for (const json& c : in) couplings.push_back(io::vertex_coupling_from_json(c));
  } else {
    couplings.push_back(io::vertex_coupling_from_json(in));
  }
  json rows = json::array();
  Csv csv({"generation", "a", "q", "c_re", "c_im"});
  for (std::size_t n = 0; n < couplings.size(); ++n) {
    InterfaceCoupling m;
    try {
      m = reduce_coupling(couplings[n], tol);
    } catch (const Error& err) {
      throw err.at_generation(n + 1);
    }
    rows.push_back(json{{"generation", n + 1}, {"interface", io::to_json(m)}});
    csv.row().add(n + 1).add(m.a).add(m.q).add(m.c);
  }
  return {json{{"reduced", rows}}, std::move(csv)};
}

Emitted cmd_reconstruct(const JobConfig& cfg, const json& in) {
  ReconstructOptions opts;
  if (cfg.tol) opts.tol.scalar = opts.tol.integer = positive(cfg.tol, 1e-9, "tol");
  std::vector<InterfaceCoupling> interfaces;
  if (is_halfline_spec(in)) {
    for (const json& m : in.at("interfaces")) interfaces.push_back(io::interface_coupling_from_json(m));
  } else if (in.is_array()) {
    for (const json& m : in) interfaces.push_back(io::interface_coupling_from_json(m));
  } else {
    interfaces.push_back(io::interface_coupling_from_json(in));
  }
  json rows = json::array();
  Csv csv({"index", "alpha", "beta", "gamma_re", "gamma_im", "b"});
  for (std::size_t k = 0; k < interfaces.size(); ++k) {
    VertexCoupling c;
    try {
      c = reconstruct_coupling(interfaces[k], opts);
    } catch (const Error& err) {
      throw err.at_generation(k + 1);
    }
    rows.push_back(json{{"index", k + 1}, {"coupling", io::to_json(c)}});
    csv.row().add(k + 1).add(c.alpha).add(c.beta).add(c.gamma).add(c.branching);
  }
  return {json{{"reconstructed", rows}}, std::move(csv)};
}

Emitted emit_matrix(const TransferMatrix& t, json doc) {
  doc["matrix"] = io::to_json(t);
  doc["det"] = io::to_json(t.determinant());
  Csv csv({"row", "col", "re", "im"});
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) csv.row().add(r).add(c).add(t(r, c));
  }
  return {std::move(doc), std::move(csv)};
}

Emitted cmd_transfer(const JobConfig& cfg, const json& in) {
  if (is_halfline_spec(in)) {
    const HalflineSystem sys = halfline_input(in);
    const double eta = cfg.eta ? require_finite(cfg.eta, "eta") : 0.0;
    const complex z{require_finite(cfg.energy, "energy"), eta};
    if (sys.is_periodic() && !cfg.right_end) return emit_matrix(monodromy(sys, z), json{{"kind", "monodromy"}});
    const double right = require_finite(cfg.right_end, "right-end");
    return emit_matrix(propagate(sys, z, sys.origin(), right), json{{"kind", "propagate"}, {"to", right}});
  }
  double tol = 1e-9;
  if (cfg.tol) tol = positive(cfg.tol, tol, "tol");
  return emit_matrix(interface_transfer(io::interface_coupling_from_json(in), tol), json{{"kind", "interface"}});
}

Emitted cmd_bands(const JobConfig& cfg, const json& in) {
  const HalflineSystem sys = halfline_input(in);
  BandOptions opts;
  opts.grid_points = grid_count(cfg, opts.grid_points);
  if (cfg.tol) opts.unit_tol = positive(cfg.tol, opts.unit_tol, "tol");
  const BandStructure b = band_structure(sys, window_of(cfg, 0.0), opts);
  Csv csv({"lower", "upper"});
  for (const Band& band : b.bands) csv.row().add(band.lower).add(band.upper);
  return {io::to_json(b), std::move(csv)};
}

Emitted cmd_weyl(const JobConfig& cfg, const json& in) {
  const HalflineSystem sys = halfline_input(in);
  const double energy = require_finite(cfg.energy, "energy");
  const double base = cfg.basepoint ? require_finite(cfg.basepoint, "basepoint") : default_basepoint(sys);
  WeylValue w;
  if (cfg.extrapolate) {
    w = weyl_m_boundary(sys, energy, base);
  } else {
    w = weyl_m(sys, {energy, positive(cfg.eta, 1e-6, "eta")}, base);
  }
  json doc = io::to_json(w);
  doc["extrapolated"] = cfg.extrapolate;
  Csv csv({"energy_re", "energy_im", "basepoint", "m_plus_re", "m_plus_im", "m_minus_re", "m_minus_im"});
  csv.row().add(w.energy).add(w.basepoint).add(w.m_plus).add(w.m_minus);
  return {std::move(doc), std::move(csv)};
}

Emitted cmd_reflectionless(const JobConfig& cfg, const json& in) {
  const HalflineSystem sys = halfline_input(in);
  const Window w = window_of(cfg, 0.0);
  const std::size_t count = grid_count(cfg, 101);
  const double base = cfg.basepoint ? require_finite(cfg.basepoint, "basepoint") : default_basepoint(sys);
  // Without an explicit eta the defect is taken on the extrapolated boundary values.
  const bool limit = cfg.extrapolate || !cfg.eta;
  const double eta = limit ? 0.0 : positive(cfg.eta, 1e-6, "eta");
  const std::vector<double> es = linear_grid(w, count);
  const std::vector<double> defects = evaluate_on_grid<double>(
      es,
      [&](double e) { return limit ? reflectionless_defect_limit(sys, e, base) : reflectionless_defect(sys, e, eta, base); },
      Execution::parallel);
  json rows = json::array();
  Csv csv({"energy", "defect"});
  for (std::size_t i = 0; i < es.size(); ++i) {
    rows.push_back(json::array({es[i], defects[i]}));
    csv.row().add(es[i]).add(defects[i]);
  }
  json doc{{"basepoint", base}, {"extrapolated", limit}, {"samples", rows}};
  if (!limit) doc["eta"] = eta;
  return {std::move(doc), std::move(csv)};
}

EigenOptions eigen_options(const JobConfig& cfg) {
  EigenOptions opts;
  if (cfg.grid) opts.points_per_unit = positive(cfg.grid, opts.points_per_unit, "grid");
  return opts;
}

Emitted cmd_eigs_halfline(const JobConfig& cfg, const json& in) {
  const HalflineSystem sys = halfline_input(in);
  const Window w = window_of(cfg, 0.0);
  const double right = require_finite(cfg.right_end, "right-end");
  const std::vector<double> evs = halfline_eigenvalues(sys, right, w, eigen_options(cfg));
  Csv csv({"energy"});
  for (double e : evs) csv.row().add(e);
  return {json{{"window", json::array({w.lower, w.upper})}, {"right_end", right}, {"eigenvalues", evs}},
          std::move(csv)};
}

TreeEigenOptions tree_options(const JobConfig& cfg) {
  TreeEigenOptions opts;
  if (cfg.grid) opts.points_per_unit = positive(cfg.grid, opts.points_per_unit, "grid");
  return opts;
}

Csv eigen_csv(const std::vector<TreeEigenvalue>& evs) {
  Csv csv({"energy", "multiplicity"});
  for (const TreeEigenvalue& ev : evs) csv.row().add(ev.energy).add(ev.multiplicity);
  return csv;
}

Emitted cmd_eigs_tree(const JobConfig& cfg, const json& in) {
  const RadialTreeSpec spec = tree_input(in);
  const std::size_t depth = depth_of(cfg, spec);
  const Window w = window_of(cfg, 0.0);
  const auto evs = tree_eigenvalues(spec, depth, w, tree_options(cfg));
  return {json{{"window", json::array({w.lower, w.upper})}, {"depth", depth}, {"eigenvalues", io::to_json(evs)}},
          eigen_csv(evs)};
}

Emitted cmd_compare(const JobConfig& cfg, const json& in) {
  const RadialTreeSpec spec = tree_input(in);
  const std::size_t depth = depth_of(cfg, spec);
  const Window w = window_of(cfg, 0.0);
  const double tol = positive(cfg.tol, 1e-6, "tol");
  const SpectralComparison c = compare_spectra(spec, depth, w, tol, tree_options(cfg), eigen_options(cfg));
  json doc = io::to_json(c);
  doc["depth"] = depth;
  doc["status"] = c.pass ? "PASS" : "FAIL";
  Csv csv({"tree", "direct_sum", "mismatch"});
  for (const auto& [t, h] : c.matched) csv.row().add(t).add(h).add(std::abs(t - h));
  return {std::move(doc), std::move(csv), !c.pass};
}

Emitted cmd_gen_seq(const JobConfig&, const json& in) {
  const DataWord word = io::word_from_json(in);
  double root_gap = 1.0;
  if (in.contains("root_gap")) {
    if (!in.at("root_gap").is_number() || !(in.at("root_gap").get<double>() > 0.0)) {
      throw invalid("root_gap must be a positive number");
    }
    root_gap = in.at("root_gap").get<double>();
  }
  const double root_angle = in.contains("root_angle") ? io::angle_from_json(in.at("root_angle")) : kDirichlet;
  json doc = io::to_json(word.to_tree(root_gap, root_angle));
  if (in.contains("detect")) {
    const json& d = in.at("detect");
    if (!d.is_object() || !d.contains("max_preperiod") || !d.contains("max_period") ||
        !d.at("max_preperiod").is_number_unsigned() || !d.at("max_period").is_number_unsigned()) {
      throw invalid("detect needs nonnegative integers max_preperiod and max_period");
    }
    const auto period = detect_eventual_period(word, d.at("max_preperiod").get<std::size_t>(),
                                               d.at("max_period").get<std::size_t>());
    doc["eventual_period"] =
        period ? json{{"preperiod", period->preperiod}, {"period", period->period}} : json(nullptr);
  }
  Csv csv({"generation", "gap", "b", "alpha", "beta", "gamma_re", "gamma_im"});
  for (std::size_t n = 1; n <= word.size(); ++n) {
    const Letter& l = word.at_generation(n);
    csv.row().add(n).add(l.gap).add(l.coupling.branching).add(l.coupling.alpha).add(l.coupling.beta).add(l.coupling.gamma);
  }
  return {std::move(doc), std::move(csv)};
}

// ---- worked examples ----

struct ExampleLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string triple(const InterfaceCoupling& m) {
  return "(" + format_number(m.a) + ", " + format_number(m.q) + ", " + format_number(m.c.real()) +
         (m.c.imag() != 0.0 ? " + " + format_number(m.c.imag()) + "i" : "") + ")";
}

bool close_to(const InterfaceCoupling& m, double a, double q, complex c, double tol) {
  return std::abs(m.a - a) <= tol && std::abs(m.q - q) <= tol && std::abs(m.c - c) <= tol;
}

Letter letter(double alpha, double beta, complex gamma, int b) {
  return Letter{1.0, VertexCoupling::make(alpha, beta, gamma, b)};
}

std::vector<ExampleLine> run_examples() {
  std::vector<ExampleLine> lines;
  auto record = [&lines](std::string name, const std::function<std::pair<bool, std::string>()>& f) {
    try {
      auto [ok, detail] = f();
      lines.push_back({std::move(name), ok, std::move(detail)});
    } catch (const std::exception& e) {
      lines.push_back({std::move(name), false, std::string("error: ") + e.what()});
    }
  };

  struct Identity {
    const char* name;
    double alpha, beta;
    complex gamma;
    int b;
    double a, q;
  };
  const Identity identities[] = {
      {"reduce(0, 0, 2/3, b=4) = (0, 0, 0)", 0.0, 0.0, 2.0 / 3.0, 4, 0.0, 0.0},
      {"reduce(0, 0, 1, b=9) = (0, 0, 0)", 0.0, 0.0, 1.0, 9, 0.0, 0.0},
      {"reduce(4, -1, 0, b=4) = (2, -2, 0)", 4.0, -1.0, 0.0, 4, 2.0, -2.0},
      {"reduce(6, -2/3, 0, b=9) = (2, -2, 0)", 6.0, -2.0 / 3.0, 0.0, 9, 2.0, -2.0},
  };
  for (const Identity& id : identities) {
    record(id.name, [&id] {
      const InterfaceCoupling m = reduce_coupling(VertexCoupling::make(id.alpha, id.beta, id.gamma, id.b));
      return std::pair{close_to(m, id.a, id.q, 0.0, 1e-12), "got " + triple(m)};
    });
  }

  record("interface (2, -2, 0): u(t+) = -u'(t-), u'(t+) = u(t-)", [] {
    const TransferMatrix t = interface_transfer({2.0, -2.0, 0.0});
    TransferMatrix expected;
    expected << 0.0, -1.0, 1.0, 0.0;
    const double err = (t - expected).cwiseAbs().maxCoeff();
    return std::pair{err <= 1e-12, "max entry error " + format_number(err)};
  });

  record("reconstruct(2, -2, 0) picks the b = 1 representative", [] {
    const VertexCoupling c = reconstruct_coupling({2.0, -2.0, 0.0});
    const bool ok = c.branching == 1 && c.alpha == 2.0 && c.beta == -2.0 && c.gamma == complex{};
    return std::pair{ok, "b = " + std::to_string(c.branching)};
  });

  const std::size_t horizon = 32;
  for (auto [kind, name, strength] : {std::tuple{PresetKind::standard, "standard", 0.0},
                                       std::tuple{PresetKind::delta, "delta alpha=1", 1.0},
                                       std::tuple{PresetKind::delta_prime, "delta' beta=-1", -1.0}}) {
    record(std::string("check ") + name + " preset (b = 2): (b)-(d) hold", [kind, strength] {
      const DataWord w = periodic_word({Letter{1.0, preset(kind, 2, strength)}}, {}, horizon);
      const ConditionReport r = check_conditions(w.to_tree(), horizon);
      const bool ok = r.finitely_many_separating && r.denominator_nonzero && r.injective;
      return std::pair{ok, ok ? "conditions hold" : "a condition failed"};
    });
  }

  const DataWord counter1 = power2_word(letter(0, 0, 2.0 / 3.0, 4), letter(0, 0, 1.0, 9), horizon);
  const DataWord counter2 = power2_word(letter(4, -1, 0.0, 4), letter(6, -2.0 / 3.0, 0.0, 9), horizon);
  record("counterexample Re gamma != 0: (a)-(c) hold, (d) fails", [&counter1] {
    const ConditionReport r = check_conditions(counter1.to_tree(), horizon);
    const bool ok = r.finitely_many_values && r.finitely_many_separating && r.denominator_nonzero && !r.injective &&
                    r.real_gamma.size() == horizon;
    return std::pair{ok, std::to_string(r.real_gamma.size()) + " generations with Re gamma != 0"};
  });
  record("counterexample alpha beta + |gamma|^2 + 4 = 0: (b), (c) hold, (d) fails", [&counter2] {
    const ConditionReport r = check_conditions(counter2.to_tree(), horizon);
    const bool ok = r.finitely_many_separating && r.denominator_nonzero && !r.injective &&
                    r.degenerate_fiber.size() == horizon;
    return std::pair{ok, std::to_string(r.degenerate_fiber.size()) + " generations on the degenerate fiber"};
  });
  record("counterexample Re gamma != 0 reduces to the free halfline", [&counter1] {
    bool ok = true;
    for (const Letter& l : counter1.letters()) ok = ok && close_to(reduce_coupling(l.coupling), 0, 0, 0.0, 1e-12);
    const BandStructure b = band_structure(HalflineSystem::chain(reduce_coupling(counter1.at_generation(1).coupling), 1.0),
                                           {-10.0, 100.0});
    ok = ok && b.bands.size() == 1 && std::abs(b.bands[0].lower) <= 1e-9 && b.bands[0].upper == 100.0;
    return std::pair{ok, b.bands.empty() ? std::string("no band")
                                         : "band [" + format_number(b.bands[0].lower) + ", " +
                                               format_number(b.bands[0].upper) + "]"};
  });
  record("b = 4 and b = 9 data give byte-identical band structures", [] {
    const Window w{-10.0, 100.0};
    const std::string s4 =
        io::to_json(band_structure(HalflineSystem::chain(reduce_coupling(VertexCoupling::make(4, -1, 0.0, 4)), 1.0), w))
            .dump();
    const std::string s9 = io::to_json(band_structure(
                                           HalflineSystem::chain(
                                               reduce_coupling(VertexCoupling::make(6, -2.0 / 3.0, 0.0, 9)), 1.0),
                                           w))
                               .dump();
    return std::pair{s4 == s9, std::to_string(s4.size()) + " bytes each"};
  });

  record("compare standard b = 2 tree, depth 3, window [0, 100]", [] {
    const DataWord w = periodic_word({Letter{1.0, preset(PresetKind::standard, 2)}}, {}, 2);
    const SpectralComparison c = compare_spectra(w.to_tree(), 3, {0.0, 100.0}, 1e-6);
    return std::pair{c.pass, std::to_string(c.tree_count) + " eigenvalues, max mismatch " +
                                 format_number(c.max_mismatch)};
  });
  return lines;
}

Emitted cmd_examples() {
  const std::vector<ExampleLine> lines = run_examples();
  json rows = json::array();
  Csv csv({"status", "example", "detail"});
  bool all = true;
  for (const ExampleLine& l : lines) {
    const char* status = l.pass ? "PASS" : "FAIL";
    rows.push_back(json{{"status", status}, {"example", l.name}, {"detail", l.detail}});
    csv.row().add(std::string(status)).add(l.name).add(l.detail);
    all = all && l.pass;
  }
  return {json{{"examples", rows}, {"all_pass", all}}, std::move(csv), !all};
}

using Handler = std::function<Emitted(const JobConfig&, const json&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"check", cmd_check},
      {"reduce", cmd_reduce},
      {"reconstruct", cmd_reconstruct},
      {"transfer", cmd_transfer},
      {"bands", cmd_bands},
      {"weyl", cmd_weyl},
      {"reflectionless", cmd_reflectionless},
      {"eigs-halfline", cmd_eigs_halfline},
      {"eigs-tree", cmd_eigs_tree},
      {"compare", cmd_compare},
      {"gen-seq", cmd_gen_seq},
  };
  return table;
}

void apply_threads(int threads) {
  if (threads < 0) throw invalid("--threads must be nonnegative");
  if (threads == 0) {
    const char* env = std::getenv("TREESPEC_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0 || v > 4096) throw invalid("TREESPEC_THREADS must be a positive integer");
    threads = static_cast<int>(v);
  }
  omp_set_num_threads(threads);
}

std::string error_record(const Error& e, const std::string& command) {
  json j{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}, {"command", command}};
  if (e.generation()) j["generation"] = *e.generation();
  return j.dump();
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, h] : handlers()) out.push_back(name);
    out.push_back("examples");
    std::sort(out.begin(), out.end());
    return out;
  }();
  return names;
}

RunResult run(const JobConfig& cfg) {
  RunResult result;
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw invalid("--format must be json or csv");
    apply_threads(cfg.threads);
    Emitted e;
    if (cfg.command == "examples") {
      e = cmd_examples();
    } else {
      const auto h = handlers().find(cfg.command);
      if (h == handlers().end()) throw invalid("unknown command \"" + cfg.command + "\"");
      json storage;
      e = h->second(cfg, input_of(cfg, storage));
    }
    result.output = cfg.format == "csv" && e.csv ? e.csv->str() : e.doc.dump(2) + "\n";
    if (e.failed) {
      result.exit_code = kExitMath;
      result.error = json{{"error", "CheckFailed"}, {"message", "one or more checks failed"}, {"command", cfg.command}}
                         .dump();
    }
    if (cfg.output_path) {
      std::ofstream out(*cfg.output_path, std::ios::binary);
      if (!out || !(out << result.output)) throw invalid("cannot write output file " + *cfg.output_path);
    }
  } catch (const Error& e) {
    result.exit_code = is_mathematical(e.kind()) ? kExitMath : kExitValidation;
    result.output.clear();
    result.error = error_record(e, cfg.command);
  } catch (const json::exception& e) {
    result.exit_code = kExitValidation;
    result.output.clear();
    result.error = error_record(invalid(std::string("malformed JSON input: ") + e.what()), cfg.command);
  }
  return result;
}

}  // namespace treespec::cli
