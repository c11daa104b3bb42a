#pragma once

#include "optensor/operator_tensor.hpp"

namespace optensor {

/// Outcome of the two physicality checks: positivity of the input-transposed
/// operator, and no signaling to the past (output-contracted operator bounded
/// by the identity on the inputs).
struct PhysicalityVerdict {
  bool psd_ok = false;
  bool causal_ok = false;
  double min_eigen_after_input_transpose = 0.0;
  Eigen::VectorXd causal_slack_spectrum;  // spectrum of I_in - transpose(A * I_out)
  bool ok() const { return psd_ok && causal_ok; }
};

PhysicalityVerdict check_physical(const OperatorTensor& a,
                                  const Tolerances& tol = {});

/// True iff all members share the wire signature, each passes check_physical,
/// and the output-contracted operators sum to the identity on the inputs.
bool check_complete_set(const std::vector<OperatorTensor>& ops,
                        const Tolerances& tol = {});

/// Preparation: positive density operator with trace at most one, emitted on
/// an output wire.
OperatorTensor from_state(const Matrix& density, const WireInstance& out,
                          const Tolerances& tol = {});

/// Measurement effect 0 <= E <= I on an input wire.
OperatorTensor from_effect(const Matrix& povm_element, const WireInstance& in,
                           const Tolerances& tol = {});

/// Completely positive trace-non-increasing map given by Kraus operators
/// (each dim(outs) x dim(ins)). The stored matrix is the input-transposed
/// Choi matrix, so contraction reproduces sequential channel action and the
/// positivity check reads off complete positivity.
OperatorTensor from_channel(const std::vector<Matrix>& kraus,
                            const std::vector<WireInstance>& ins,
                            const std::vector<WireInstance>& outs,
                            const Tolerances& tol = {});

}  // namespace optensor
