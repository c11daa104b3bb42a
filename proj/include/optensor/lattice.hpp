#pragma once

#include <map>
#include <utility>

#include "optensor/operator_tensor.hpp"
#include "optensor/physicality.hpp"
#include "optensor/spacetime.hpp"

namespace optensor {

/// Diagonal qubit lattice: one left-moving and one right-moving qubit enter
/// and leave every vertex. Vertex (r, c) receives its left input from
/// (r-1, c-1) and its right input from (r-1, c+1).
struct LatticeSpec {
  int width = 4;
  int height = 4;
  /// 16x16 vertex operators in factor order (out_left, out_right, in_left,
  /// in_right), keyed by r * width + c. Missing vertices act as the identity
  /// gate.
  std::map<int, Matrix> vertex_ops;

  Matrix vertex_op(int r, int c) const;
};

/// Vertex operator of a two-qubit unitary gate (input-transposed Choi form).
Matrix gate_vertex(const Matrix& unitary);

struct TypingSurface {
  std::vector<int> plus_ids;   // outputs, ascending
  std::vector<int> minus_ids;  // inputs, ascending
};

struct RegionOperator {
  OperatorTensor op;
  TypingSurface surface;
  std::map<int, double> wire_time;  // boundary wire id -> time in [0, L]
};

/// Contracts the vertex operators of the region over its interior wires.
/// Wire times: inputs of row r sit at r*L/height, outputs at (r+1)*L/height.
/// Throws BadRegion for empty regions or out-of-lattice vertices.
RegionOperator build_region_operator(
    const LatticeSpec& lat, const std::vector<std::pair<int, int>>& region,
    double L = 1.0, const Tolerances& tol = {});

struct StepRecord {
  int n = 0;            // 1 = latest surface, N = earliest
  long long k_n = 0;    // D * 2^(N-n+1)
  double alpha = 0.0;   // trace-norm truncation error
  double min_eig = 0.0; // of the input-transposed truncated operator
  double neg = 0.0;     // sum of its negative eigenvalues
  double beta = 0.0;    // causality-failure residual (trace norm)
};

/// Backward recursion over the foliation's surfaces: at each step the
/// operator's late outputs are contracted with the identity, the result is
/// split off the identity on the late inputs (beta records the failure), and
/// the remainder is projected onto the first K_n low-weight basis states per
/// surface part (alpha records the truncation error). The last step also
/// checks the identity condition on the initial surface. Throws
/// TruncationOverflow when K_n is not representable.
std::vector<StepRecord> check_deterministic_recursion(const RegionOperator& a,
                                                      const Foliation& fol,
                                                      int D,
                                                      const Tolerances& tol = {});

struct SweepRow {
  int m = 0;
  double l = 0.0;
  int F = 0;
  double A_l = 0.0;
  double W_l = 0.0;
};

struct SweepOptions {
  double L = 1.0;
  int m_max = 6;
  int D = 2;
  std::uint64_t seed = 1;
  bool grid = true;
  double eps_witness = 1e-6;
  int max_foliations = 12;
  int threads = 0;  // 0: OPTENSOR_THREADS env or hardware concurrency
};

struct WitnessReport {
  std::vector<SweepRow> rows;
  std::vector<std::vector<std::vector<StepRecord>>> diagnostics;  // [m-1][f][step]
  double slope = 0.0;        // least-squares slope of W over m
  bool physical = false;     // decreasing trend and final W below eps_witness
  bool approximation_ok = false;  // A_l trend decreasing (or identically small)
};

WitnessReport witness_sweep(const RegionOperator& a,
                            const SpacetimeBackground& bg,
                            const SweepOptions& opt = {},
                            const Tolerances& tol = {});

/// General (sub-deterministic) operator: physical iff both the operator and
/// its completion remainder have positive input transpose. Throws
/// BadCompletion when `det` is not a deterministic physical operator.
bool check_general_operator(const OperatorTensor& a, const OperatorTensor& det,
                            const Tolerances& tol = {});

}  // namespace optensor
