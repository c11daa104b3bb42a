#include "optensor/physicality.hpp"

#include <set>
#include <sstream>

namespace optensor {
namespace {

std::set<int> ids_of(const std::vector<WireInstance>& ws) {
  std::set<int> ids;
  for (const auto& w : ws) ids.insert(w.id);
  return ids;
}

double psd_threshold(double dim, double tn, double eps) {
  return eps * dim * std::max(1.0, tn / dim);
}

}  // namespace

PhysicalityVerdict check_physical(const OperatorTensor& a,
                                  const Tolerances& tol) {
  PhysicalityVerdict v;

  const OperatorTensor t_in = partial_transpose(a, ids_of(a.inputs()));
  const Eigen::VectorXd ev = eigenvalues(t_in, tol.eps_herm);
  v.min_eigen_after_input_transpose = ev.minCoeff();
  v.psd_ok = ev.minCoeff() >=
             -psd_threshold(static_cast<double>(a.dim()), ev.cwiseAbs().sum(),
                            tol.eps_psd);

  const OperatorTensor reduced = partial_trace(a, ids_of(a.outputs()));
  const Matrix slack =
      Matrix::Identity(reduced.dim(), reduced.dim()) -
      reduced.matrix().transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> solver((slack + slack.adjoint()) / 2.0,
                                               Eigen::EigenvaluesOnly);
  v.causal_slack_spectrum = solver.eigenvalues();
  v.causal_ok =
      v.causal_slack_spectrum.minCoeff() >=
      -psd_threshold(static_cast<double>(reduced.dim()),
                     trace_norm(reduced.matrix()), tol.eps_psd);
  return v;
}

bool check_complete_set(const std::vector<OperatorTensor>& ops,
                        const Tolerances& tol) {
  if (ops.empty()) return false;
  const OperatorTensor ref = ops.front().canonical();
  for (const auto& op : ops)
    if (op.canonical().factors() != ref.factors())
      throw SignatureMismatch("complete-set members differ in wire signature");

  Matrix sum;
  for (const auto& op : ops) {
    const Matrix reduced =
        partial_trace(op.canonical(), ids_of(op.outputs())).matrix();
    sum = (sum.size() == 0) ? reduced : Matrix(sum + reduced);
  }
  const Matrix dev = sum - Matrix::Identity(sum.rows(), sum.cols());
  if (dev.cwiseAbs().maxCoeff() > tol.eps_eq) return false;

  for (const auto& op : ops)
    if (!check_physical(op, tol).ok()) return false;
  return true;
}

OperatorTensor from_state(const Matrix& density, const WireInstance& out,
                          const Tolerances& tol) {
  if (out.orientation != Orientation::output)
    throw NotPhysicalInput("state wire must be an output");
  if (density.rows() != out.type.dim || density.cols() != out.type.dim)
    throw NotPhysicalInput("density matrix dimension does not match the wire");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      (density + density.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if ((density - density.adjoint()).cwiseAbs().maxCoeff() > tol.eps_herm ||
      solver.eigenvalues().minCoeff() <
          -psd_threshold(static_cast<double>(density.rows()),
                         solver.eigenvalues().cwiseAbs().sum(), tol.eps_psd))
    throw NotPhysicalInput("density matrix is not positive semidefinite");
  if (density.trace().real() > 1.0 + tol.eps_eq)
    throw NotPhysicalInput("density matrix has trace above one");
  return OperatorTensor({out}, density, tol.eps_herm);
}

OperatorTensor from_effect(const Matrix& povm_element, const WireInstance& in,
                           const Tolerances& tol) {
  if (in.orientation != Orientation::input)
    throw NotPhysicalInput("effect wire must be an input");
  if (povm_element.rows() != in.type.dim || povm_element.cols() != in.type.dim)
    throw NotPhysicalInput("effect dimension does not match the wire");
  if ((povm_element - povm_element.adjoint()).cwiseAbs().maxCoeff() >
      tol.eps_herm)
    throw NotPhysicalInput("effect is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(
      (povm_element + povm_element.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  const double thr = psd_threshold(
      static_cast<double>(povm_element.rows()),
      solver.eigenvalues().cwiseAbs().sum(), tol.eps_psd);
  if (solver.eigenvalues().minCoeff() < -thr ||
      solver.eigenvalues().maxCoeff() > 1.0 + thr)
    throw NotPhysicalInput("effect is not between 0 and the identity");
  return OperatorTensor({in}, povm_element, tol.eps_herm);
}

OperatorTensor from_channel(const std::vector<Matrix>& kraus,
                            const std::vector<WireInstance>& ins,
                            const std::vector<WireInstance>& outs,
                            const Tolerances& tol) {
  long din = 1, dout = 1;
  for (const auto& w : ins) {
    if (w.orientation != Orientation::input)
      throw NotPhysicalInput("channel input wire has output orientation");
    din *= w.type.dim;
  }
  for (const auto& w : outs) {
    if (w.orientation != Orientation::output)
      throw NotPhysicalInput("channel output wire has input orientation");
    dout *= w.type.dim;
  }
  if (kraus.empty()) throw NotPhysicalInput("empty Kraus list");
  Matrix norm = Matrix::Zero(din, din);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw NotPhysicalInput("Kraus operator dimension mismatch");
    norm += k.adjoint() * k;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((norm + norm.adjoint()) / 2.0,
                                               Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().maxCoeff() >
      1.0 + psd_threshold(static_cast<double>(din),
                          solver.eigenvalues().cwiseAbs().sum(), tol.eps_psd))
    throw NotPhysicalInput("Kraus operators define a trace-increasing map");

  // Input-transposed Choi matrix: block (j, i) holds sum_k K|i><j|K^dag.
  Matrix m = Matrix::Zero(din * dout, din * dout);
  for (const auto& k : kraus)
    for (long i = 0; i < din; ++i)
      for (long j = 0; j < din; ++j)
        m.block(j * dout, i * dout, dout, dout) +=
            k.col(i) * k.col(j).adjoint();

  std::vector<WireInstance> factors = ins;
  factors.insert(factors.end(), outs.begin(), outs.end());
  return OperatorTensor(std::move(factors), std::move(m), tol.eps_herm)
      .canonical();
}

}  // namespace optensor
