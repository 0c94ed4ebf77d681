#pragma once

// JSON encodings of the input specs and of every result type.
//
// Complex numbers are {"re": x, "im": y} (a bare number is accepted on input);
// angles are radians, with the string "dirichlet" standing for pi/2.

#include <json.hpp>

#include "treespec/conditions.hpp"
#include "treespec/halfline.hpp"
#include "treespec/radial_tree.hpp"
#include "treespec/seqgen.hpp"
#include "treespec/spectra.hpp"
#include "treespec/tree.hpp"

namespace treespec::io {

using nlohmann::json;

complex complex_from_json(const json& j);
json to_json(complex z);

double angle_from_json(const json& j);
json angle_to_json(double angle);

VertexCoupling vertex_coupling_from_json(const json& j);
json to_json(const VertexCoupling& c);

InterfaceCoupling interface_coupling_from_json(const json& j);
json to_json(const InterfaceCoupling& m);

RadialTreeSpec tree_spec_from_json(const json& j);
json to_json(const RadialTreeSpec& spec);

HalflineSystem halfline_from_json(const json& j);
json to_json(const HalflineSystem& sys);

Letter letter_from_json(const json& j);

/// Generator description ({"kind": "periodic" | "power2" | "substitution", ...}) to a word.
DataWord word_from_json(const json& j);

json to_json(const TransferMatrix& m);
json to_json(const ConditionReport& r);
json to_json(const BandStructure& b);
json to_json(const WeylValue& w);
json to_json(const std::vector<TreeEigenvalue>& evs);
json to_json(const SpectralComparison& c);

}  // namespace treespec::io
