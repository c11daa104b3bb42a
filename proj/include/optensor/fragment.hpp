#pragma once

#include <string>

#include "optensor/operator_tensor.hpp"

namespace optensor {

/// A link joins wire id_a of node_a (an output) to wire id_b of node_b (an
/// input), or the other way around; orientation is resolved at validation.
/// The two ids may coincide when the nodes use a shared subscript label.
struct Link {
  int node_a = 0;
  int id_a = 0;
  int node_b = 0;
  int id_b = 0;
};

struct Fragment {
  std::vector<OperatorTensor> nodes;
  std::vector<Link> links;
};

struct WiringDiagnostics {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

WiringDiagnostics validate_wiring(const Fragment& f);

/// Links every wire id that appears in exactly two nodes.
std::vector<Link> auto_links(const std::vector<OperatorTensor>& nodes);

/// Contracts all links, greedily picking the pair of parts with the smallest
/// intermediate dimension. Returns a tensor on the open wires; a closed
/// circuit yields a 0-factor scalar tensor. Throws InvalidWiring when
/// validate_wiring reports issues.
OperatorTensor contract(const Fragment& f, const Tolerances& tol = {});

/// Closed circuits of physical operators only: returns the circuit
/// probability. Throws PhysicalityViolation when a node fails the
/// physicality conditions or the scalar leaves [0,1] beyond tolerance.
double circuit_probability(const Fragment& f, const Tolerances& tol = {});

}  // namespace optensor
