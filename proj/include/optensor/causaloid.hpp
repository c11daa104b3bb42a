#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "optensor/errors.hpp"
#include "optensor/tolerances.hpp"

namespace optensor {

/// Joint probabilities for a region pair: rows are [outcome|setting] pairs
/// inside the region, columns are external contexts.
struct ProbabilityTable {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  Eigen::MatrixXd entries;

  int row_index(const std::string& label) const;
};

struct FiducialSet {
  std::vector<int> rows;  // ascending row indices
};

struct Decomposition {
  Eigen::MatrixXd r;  // one row per table row: coordinates over the fiducial set
  Eigen::MatrixXd p;  // one column per table column: generalized states
};

struct HeraldReport {
  bool heralded = false;
  double k = 0.0;
  double residual = 0.0;  // sine of the angle between the two vectors
};

/// Minimal fiducial row set: size equals the numerical rank of the table
/// (threshold eps_eq * sigma_max * max(rows, cols)); rows picked by
/// column-pivoted factorization, returned ascending. Throws DegenerateTable
/// on an all-zero table.
FiducialSet minimal_fiducials(const ProbabilityTable& t,
                              double eps_eq = Tolerances{}.eps_eq);

/// Least-squares split of the table through the fiducial rows: every entry is
/// reproduced as r(row) . p(col). Fiducial rows get exact unit coordinate
/// vectors. Throws BadFiducials when the reconstruction error exceeds
/// eps_eq * rows * cols.
Decomposition decompose(const ProbabilityTable& t, const FiducialSet& omega,
                        double eps_eq = Tolerances{}.eps_eq);

/// Proportionality test r = k * r2. Throws ZeroEffect when r2 = 0.
HeraldReport herald(const Eigen::VectorXd& r, const Eigen::VectorXd& r2,
                    double tol = Tolerances{}.eps_prop);

/// Range of (r.p)/(r2.p) over a finite set of admissible states. Throws
/// UnboundedRatio when some denominator vanishes.
std::pair<double, double> herald_bounds(
    const Eigen::VectorXd& r, const Eigen::VectorXd& r2,
    const std::vector<Eigen::VectorXd>& admissible);

/// Real tensor over fiducial indices, stored row-major with the first wire
/// varying slowest. Wire ids are unique within a node.
struct DuoNode {
  std::vector<int> wire_ids;
  std::vector<int> dims;
  Eigen::VectorXd data;
};

struct DuoLink {
  int node_a = 0;
  int wire_a = 0;
  int node_b = 0;
  int wire_b = 0;
  Eigen::MatrixXd hookup;  // inserted on the link before summing
};

/// Contracts linked indices with the hookup matrix inserted on each link;
/// identity hookups reduce to plain tensor contraction. Throws
/// HookupMismatch when a hookup is not square of the linked dimension.
DuoNode duotensor_contract(std::vector<DuoNode> nodes,
                           const std::vector<DuoLink>& links);

}  // namespace optensor
