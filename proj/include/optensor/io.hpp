#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "optensor/causaloid.hpp"
#include "optensor/fragment.hpp"
#include "optensor/lattice.hpp"
#include "optensor/opspace.hpp"
#include "optensor/physicality.hpp"

namespace optensor::io {

using nlohmann::json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Canonical serialization: keys sorted, floats in shortest round-trip form.
std::string dump(const json& j);

/// Operator format: {"outputs": [{"type","dim","id"},...], "inputs": [...],
/// "matrix": [[[re,im],...],...]} with the matrix indexed in outputs-then-
/// inputs factor order.
json operator_to_json(const OperatorTensor& t);
OperatorTensor operator_from_json(const json& j);
OperatorTensor load_operator(const std::string& path);

/// Circuit format: {"nodes": [operator or {"file": path}, ...],
/// "links": [[nodeA, idA, nodeB, idB], ...]}; omitted links are inferred
/// from shared wire ids.
Fragment load_circuit(const std::string& path);

/// CSV: header "row,<col label>,..."; one line per [outcome|setting] row.
ProbabilityTable load_table(const std::string& path);

json verdict_to_json(const PhysicalityVerdict& v);
json herald_to_json(const HeraldReport& r);

std::string sweep_to_csv(const WitnessReport& r);
json witness_to_json(const WitnessReport& r);

/// Lattice format: {"width", "height", "vertices": [{"r","c","unitary": 4x4
/// complex entries [re,im]} or {"r","c","matrix": 16x16}], "region":
/// [[r,c],...]}.
std::pair<LatticeSpec, std::vector<std::pair<int, int>>> load_lattice(
    const std::string& path);

/// CSV: point id followed by the scalar columns.
FieldSample load_field_sample(const std::string& path);
json gamma_to_json(const GammaSurface& g);

}  // namespace optensor::io
