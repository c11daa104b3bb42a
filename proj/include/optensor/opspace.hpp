#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <vector>

#include "optensor/errors.hpp"

namespace optensor {

/// Finite stand-in for a manifold with nominated scalar fields: every point
/// id carries a full K-vector of scalar values.
struct FieldSample {
  std::map<int, Eigen::VectorXd> scalars;
};

/// The set of scalar-coincidence vectors realized by a sample, with
/// coordinates canonicalized to 12 decimal places so set membership is exact.
struct GammaSurface {
  std::set<std::vector<double>> points;
};

/// Axis-aligned box in scalar space (inclusive bounds).
struct OpRegion {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  bool contains(const std::vector<double>& s) const;
};

GammaSurface compute_gamma(const FieldSample& f);

GammaSurface region_outcome(const GammaSurface& g, const OpRegion& r);

}  // namespace optensor
