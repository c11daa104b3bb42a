#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "optensor/errors.hpp"

namespace optensor {

/// Time-direction field on 1+1 Minkowski space: point (t, x) -> tau vector.
using TauField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;

/// Fixed 1+1 Minkowski metric with a time-direction field (default: constant
/// forward-pointing).
struct SpacetimeBackground {
  TauField tau = [](const Eigen::Vector2d&) {
    return Eigen::Vector2d(1.0, 0.0);
  };
};

struct Rect {
  double t0 = 0.0, t1 = 1.0, x0 = 0.0, x1 = 1.0;
  double area() const { return (t1 - t0) * (x1 - x0); }
};

/// True iff `to` lies strictly inside the forward light cone of `from`, with
/// the forward direction fixed by the tau field.
bool chronological(const Eigen::Vector2d& from, const Eigen::Vector2d& to,
                   const SpacetimeBackground& bg);

struct CausalSet {
  std::vector<Eigen::Vector2d> points;      // (t, x)
  std::vector<std::vector<bool>> precedes;  // strict partial order
  // Covering links (u, v) with u immediately below v. Isolated points carry a
  // stub link (p, p): a worldline segment every spacelike cut passes through.
  std::vector<std::pair<int, int>> wires;
};

CausalSet causal_set_from_points(std::vector<Eigen::Vector2d> pts,
                                 const SpacetimeBackground& bg);

/// Point process of density 1/l^2 (Poisson, or a regular grid of cell size l
/// with points at cell centers). Deterministic given the seed. Throws
/// TooSparse when no point lands in the region.
CausalSet sprinkle(const SpacetimeBackground& bg, const Rect& region, double l,
                   std::uint64_t seed, bool grid = false);

/// A spacelike cut: the set of wires crossing from an order ideal to its
/// complement, stamped with the latest point time inside the ideal.
struct Cut {
  std::vector<int> wires;  // sorted wire indices
  double time = 0.0;
};

struct Foliation {
  std::vector<Cut> cuts;  // earliest first
};

struct FoliationOptions {
  int max_foliations = 12;
  int sample_attempts = 120;
  int exhaustive_limit = 9;  // walk all linear extensions up to this many points
  std::uint64_t seed = 0;
  // When set, drop every cut before the last one strictly earlier than this
  // time (the region below the first kept cut then carries only inputs).
  std::optional<double> min_output_time;
};

/// Ordered cut sequences generated from linear extensions of the causal set,
/// deduplicated by their wire-intersection pattern. Throws NoFoliation when
/// the set is empty.
std::vector<Foliation> generate_foliations(const CausalSet& cs,
                                           const FoliationOptions& opt = {});

/// True iff the two fields point into the same light cone at every sample
/// point (both strictly timelike, matching time orientation).
bool tau_gauge_equivalent(const TauField& t1, const TauField& t2,
                          const std::vector<Eigen::Vector2d>& sample_points);

}  // namespace optensor
