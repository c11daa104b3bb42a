#pragma once

#include <Eigen/Dense>
#include <complex>
#include <set>
#include <vector>

#include "optensor/errors.hpp"
#include "optensor/tolerances.hpp"
#include "optensor/wire.hpp"

namespace optensor {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Hermitian operator over a labeled tensor-product space. Factors are kept
/// in declaration order; the matrix is indexed row-major by that order (the
/// first factor varies slowest). Immutable after construction.
class OperatorTensor {
 public:
  /// Validates dimensions and Hermiticity (throws NotHermitian when the
  /// max-abs deviation from the adjoint exceeds eps_herm * max(1, ||A||_max)).
  OperatorTensor(std::vector<WireInstance> factors, Matrix matrix,
                 double eps_herm = Tolerances{}.eps_herm);

  const std::vector<WireInstance>& factors() const { return factors_; }
  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  std::vector<WireInstance> inputs() const;
  std::vector<WireInstance> outputs() const;

  bool has_wire(int id) const;
  /// Factor position of a wire id; throws UnknownWire.
  int factor_of(int id) const;
  const WireInstance& wire(int id) const { return factors_[factor_of(id)]; }

  /// Tensor with factors reordered to `order` (a permutation of positions).
  OperatorTensor permuted(const std::vector<int>& order) const;

  /// Canonical factor order: outputs before inputs, ids ascending within each.
  OperatorTensor canonical() const;

  /// Identity operator on the given wires.
  static OperatorTensor identity(std::vector<WireInstance> wires);

  /// 0-factor scalar tensor.
  static OperatorTensor scalar(Complex value, double eps_herm = Tolerances{}.eps_herm);

 private:
  std::vector<WireInstance> factors_;
  Matrix matrix_;
};

/// Kronecker product; wire lists concatenate. Throws DuplicateWire when the
/// operands share a wire id.
OperatorTensor tensor_product(const OperatorTensor& a, const OperatorTensor& b);

/// Partial trace over the factors holding the given wire ids.
OperatorTensor partial_trace(const OperatorTensor& a, const std::set<int>& wire_ids);

/// Transpose on the selected factors only. Involution.
OperatorTensor partial_transpose(const OperatorTensor& a, const std::set<int>& wire_ids);

/// Real spectrum, ascending. Throws NotHermitian beyond tolerance.
Eigen::VectorXd eigenvalues(const OperatorTensor& a,
                            double eps_herm = Tolerances{}.eps_herm);

/// Sum of absolute eigenvalues.
double trace_norm(const OperatorTensor& a);
double trace_norm(const Matrix& m);

std::complex<double> trace(const OperatorTensor& a);

/// Scale-aware positivity: min eigenvalue >= -eps_psd * dim * max(1, tracenorm/dim).
bool is_psd(const OperatorTensor& a, const Tolerances& tol = {});

/// Value of a 0-factor tensor; throws NonRealScalar when |Im| > eps_eq.
double as_scalar(const OperatorTensor& a, double eps_eq = Tolerances{}.eps_eq);

/// Contract two tensors over wire pairs (id in a, id in b); paired wires must
/// have equal type and opposite orientation. The ket index of one factor pairs
/// with the bra index of the other, reproducing Tr(AB) in the single-wire
/// case. Result carries a's free factors followed by b's free factors.
OperatorTensor contract_pair(const OperatorTensor& a, const OperatorTensor& b,
                             const std::vector<std::pair<int, int>>& id_pairs);

/// Convenience: contract over ids present in both operands.
OperatorTensor contract_pair(const OperatorTensor& a, const OperatorTensor& b,
                             const std::vector<int>& wire_ids);

/// Contract a tensor with itself over a wire id appearing twice (once as
/// input, once as output): ids are (output id, input id) positions given as
/// factor ids. Used for self-loops produced when nodes merge.
OperatorTensor self_contract(const OperatorTensor& a, int out_id, int in_id);

}  // namespace optensor
