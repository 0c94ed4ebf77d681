#include "treespec/json_io.hpp"

#include <string>

#include "treespec/errors.hpp"

namespace treespec::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::invalid_argument, std::string("missing JSON field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorKind::invalid_argument, std::string(what) + " must be a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), key) : fallback;
}

std::size_t count_field(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(ErrorKind::invalid_argument, std::string(key) + " must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_object()) return {number_or(j, "re", 0.0), number_or(j, "im", 0.0)};
  throw Error(ErrorKind::invalid_argument, "complex value must be a number or {\"re\", \"im\"}");
}

json to_json(complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json angle_to_json(double angle) { return angle == kDirichlet ? json("dirichlet") : json(angle); }

double angle_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "dirichlet") return kDirichlet;
    throw Error(ErrorKind::invalid_argument, "angle string must be \"dirichlet\"");
  }
  return number(j, "angle");
}

VertexCoupling vertex_coupling_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "generation entry must be an object");
  const json& bj = require(j, "b");
  if (!bj.is_number_integer()) throw Error(ErrorKind::invalid_argument, "b must be an integer");
  std::vector<double> phases;
  if (j.contains("eigenphases")) {
    for (const json& p : j.at("eigenphases")) phases.push_back(angle_from_json(p));
  }
  return VertexCoupling::make(number_or(j, "alpha", 0.0), number_or(j, "beta", 0.0),
                              j.contains("gamma") ? complex_from_json(j.at("gamma")) : complex{},
                              bj.get<int>(), std::move(phases));
}

json to_json(const VertexCoupling& c) {
  return json{{"alpha", c.alpha}, {"beta", c.beta}, {"gamma", to_json(c.gamma)}, {"b", c.branching},
              {"eigenphases", c.eigenphases}};
}

InterfaceCoupling interface_coupling_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::invalid_argument, "interface entry must be an object");
  InterfaceCoupling m{number_or(j, "a", 0.0), number_or(j, "q", 0.0),
                      j.contains("c") ? complex_from_json(j.at("c")) : complex{}};
  m.validate();
  return m;
}

json to_json(const InterfaceCoupling& m) { return json{{"a", m.a}, {"q", m.q}, {"c", to_json(m.c)}}; }

RadialTreeSpec tree_spec_from_json(const json& j) {
  RadialTreeSpec spec;
  for (const json& g : require(j, "gaps")) spec.gaps.push_back(number(g, "gap"));
  std::size_t n = 1;
  for (const json& g : require(j, "generations")) {
    try {
      spec.couplings.push_back(vertex_coupling_from_json(g));
    } catch (const Error& e) {
      throw e.at_generation(n);
    }
    ++n;
  }
  spec.root_angle = j.contains("root_angle") ? angle_from_json(j.at("root_angle")) : kDirichlet;
  spec.validate();
  return spec;
}

json to_json(const RadialTreeSpec& spec) {
  json gens = json::array();
  for (const VertexCoupling& c : spec.couplings) gens.push_back(to_json(c));
  return json{{"gaps", spec.gaps}, {"generations", gens}, {"root_angle", angle_to_json(spec.root_angle)}};
}

HalflineSystem halfline_from_json(const json& j) {
  std::vector<double> points;
  std::vector<InterfaceCoupling> couplings;
  for (const json& p : require(j, "points")) points.push_back(number(p, "point"));
  for (const json& m : require(j, "interfaces")) couplings.push_back(interface_coupling_from_json(m));
  std::optional<PeriodHint> period;
  if (j.contains("period") && !j.at("period").is_null()) {
    const json& pj = j.at("period");
    period = PeriodHint{count_field(pj, "preperiod"), count_field(pj, "length")};
  }
  const double left = j.contains("left_boundary") ? angle_from_json(j.at("left_boundary")) : kDirichlet;
  return HalflineSystem(number_or(j, "origin", 0.0), std::move(points), std::move(couplings), left, period);
}

json to_json(const HalflineSystem& sys) {
  json interfaces = json::array();
  for (const InterfaceCoupling& m : sys.couplings()) interfaces.push_back(to_json(m));
  json out{{"origin", sys.origin()},
           {"points", sys.points()},
           {"interfaces", interfaces},
           {"left_boundary", angle_to_json(sys.left_boundary())}};
  if (sys.period()) out["period"] = json{{"preperiod", sys.period()->preperiod}, {"length", sys.period()->length}};
  return out;
}

Letter letter_from_json(const json& j) {
  Letter l;
  l.gap = number_or(j, "gap", 1.0);
  l.coupling = vertex_coupling_from_json(j);
  return l;
}

DataWord word_from_json(const json& j) {
  const json& kind_j = require(j, "kind");
  if (!kind_j.is_string()) throw Error(ErrorKind::invalid_argument, "kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  const std::size_t length = j.contains("length") ? count_field(j, "length") : 0;
  auto letters = [](const json& arr) {
    std::vector<Letter> out;
    for (const json& l : arr) out.push_back(letter_from_json(l));
    return out;
  };
  if (kind == "periodic") {
    return periodic_word(letters(require(j, "block")), j.contains("preperiod") ? letters(j.at("preperiod"))
                                                                               : std::vector<Letter>{},
                         length);
  }
  if (kind == "power2") {
    return power2_word(letter_from_json(require(j, "special")), letter_from_json(require(j, "default")), length);
  }
  if (kind == "substitution") {
    SubstitutionRules rules;
    for (const auto& [k, v] : require(j, "rules").items()) {
      if (k.size() != 1 || !v.is_string()) {
        throw Error(ErrorKind::invalid_argument, "substitution rules map single letters to strings");
      }
      rules[k[0]] = v.get<std::string>();
    }
    std::map<char, Letter> data;
    for (const auto& [k, v] : require(j, "letters").items()) {
      if (k.size() != 1) throw Error(ErrorKind::invalid_argument, "substitution letters must be single characters");
      data[k[0]] = letter_from_json(v);
    }
    const json& seed = require(j, "seed");
    if (!seed.is_string() || seed.get<std::string>().size() != 1) {
      throw Error(ErrorKind::invalid_argument, "seed must be a single letter");
    }
    DataWord w = substitution_word(rules, seed.get<std::string>()[0], count_field(j, "iterations"), data);
    if (length > 0 && length < w.size()) {
      w = DataWord(std::vector<Letter>(w.letters().begin(), w.letters().begin() + static_cast<std::ptrdiff_t>(length)));
    }
    return w;
  }
  throw Error(ErrorKind::invalid_argument, "unknown sequence kind \"" + kind + "\"");
}

json to_json(const TransferMatrix& m) {
  return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                      json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

json to_json(const ConditionReport& r) {
  return json{
      {"horizon", r.horizon},
      {"tail_start", r.tail_start},
      {"finite_horizon_only", r.finite_horizon_only},
      {"a", {{"holds", r.finitely_many_values},
             {"distinct", {{"gaps", r.distinct_gaps}, {"b", r.distinct_branching}, {"alpha", r.distinct_alpha},
                           {"beta", r.distinct_beta}, {"gamma", r.distinct_gamma}}},
             {"unit_branching", r.unit_branching}}},
      {"b", {{"holds", r.finitely_many_separating}, {"separating", r.separating}}},
      {"c", {{"holds", r.denominator_nonzero}, {"vanishing_denominator", r.vanishing_denominator}}},
      {"d", {{"holds", r.injective}, {"real_gamma", r.real_gamma}, {"degenerate_fiber", r.degenerate_fiber}}},
      {"tau", r.tau},
      {"tau_positive", r.gaps_bounded_below},
      {"all_hold", r.all_hold()},
  };
}

json to_json(const BandStructure& b) {
  json bands = json::array();
  for (const Band& band : b.bands) bands.push_back(json::array({band.lower, band.upper}));
  return json{{"window", json::array({b.window.lower, b.window.upper})},
              {"grid_points", b.grid_points},
              {"bands", bands},
              {"trace_checked", b.trace_checked},
              {"classifier_disagreements", b.classifier_disagreements}};
}

json to_json(const WeylValue& w) {
  return json{{"energy", to_json(w.energy)},
              {"basepoint", w.basepoint},
              {"m_plus", to_json(w.m_plus)},
              {"m_minus", to_json(w.m_minus)}};
}

json to_json(const std::vector<TreeEigenvalue>& evs) {
  json out = json::array();
  for (const TreeEigenvalue& ev : evs) out.push_back(json{{"energy", ev.energy}, {"multiplicity", ev.multiplicity}});
  return out;
}

json to_json(const SpectralComparison& c) {
  json pairs = json::array();
  for (const auto& [t, h] : c.matched) pairs.push_back(json::array({t, h}));
  return json{{"window", json::array({c.window.lower, c.window.upper})},
              {"tree", to_json(c.tree)},
              {"direct_sum", to_json(c.direct_sum)},
              {"tree_count", c.tree_count},
              {"direct_sum_count", c.direct_sum_count},
              {"matched", pairs},
              {"max_mismatch", c.max_mismatch},
              {"tol", c.tol},
              {"pass", c.pass}};
}

}  // namespace treespec::io
