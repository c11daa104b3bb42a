#include "optensor/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace optensor {

bool chronological(const Eigen::Vector2d& from, const Eigen::Vector2d& to,
                   const SpacetimeBackground& bg) {
  const Eigen::Vector2d tau = bg.tau(from);
  const double sign = tau(0) >= 0.0 ? 1.0 : -1.0;
  const Eigen::Vector2d d = to - from;
  return sign * d(0) > std::abs(d(1));
}

CausalSet causal_set_from_points(std::vector<Eigen::Vector2d> pts,
                                 const SpacetimeBackground& bg) {
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
            });
  CausalSet cs;
  cs.points = std::move(pts);
  const int n = static_cast<int>(cs.points.size());
  cs.precedes.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && chronological(cs.points[i], cs.points[j], bg))
        cs.precedes[i][j] = true;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!cs.precedes[i][j]) continue;
      bool covering = true;
      for (int k = 0; k < n && covering; ++k)
        if (cs.precedes[i][k] && cs.precedes[k][j]) covering = false;
      if (covering) cs.wires.emplace_back(i, j);
    }
  for (int i = 0; i < n; ++i) {
    bool related = false;
    for (int j = 0; j < n && !related; ++j)
      related = cs.precedes[i][j] || cs.precedes[j][i];
    if (!related) cs.wires.emplace_back(i, i);
  }
  std::sort(cs.wires.begin(), cs.wires.end());
  return cs;
}

CausalSet sprinkle(const SpacetimeBackground& bg, const Rect& region, double l,
                   std::uint64_t seed, bool grid) {
  if (l <= 0.0) throw TooSparse("characteristic length must be positive");
  std::vector<Eigen::Vector2d> pts;
  if (grid) {
    const int nt = static_cast<int>(std::floor((region.t1 - region.t0) / l + 1e-9));
    const int nx = static_cast<int>(std::floor((region.x1 - region.x0) / l + 1e-9));
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < nx; ++j)
        pts.emplace_back(region.t0 + (i + 0.5) * l, region.x0 + (j + 0.5) * l);
  } else {
    std::mt19937_64 rng(seed);
    std::poisson_distribution<int> count(region.area() / (l * l));
    std::uniform_real_distribution<double> ut(region.t0, region.t1);
    std::uniform_real_distribution<double> ux(region.x0, region.x1);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double t = ut(rng);
      pts.emplace_back(t, ux(rng));
    }
  }
  if (pts.empty()) throw TooSparse("no points landed in the region");
  return causal_set_from_points(std::move(pts), bg);
}

namespace {

constexpr double kBeforeEverything = -std::numeric_limits<double>::infinity();

// Wires crossing from the ideal to its complement; stub wires cross every cut.
std::vector<int> crossing(const CausalSet& cs, const std::vector<char>& in_ideal) {
  std::vector<int> out;
  for (size_t w = 0; w < cs.wires.size(); ++w) {
    const auto [u, v] = cs.wires[w];
    if (u == v || (in_ideal[u] && !in_ideal[v])) out.push_back(static_cast<int>(w));
  }
  return out;
}

// Builds the cut sequence for one linear extension of the points.
std::vector<Cut> cuts_along(const CausalSet& cs, const std::vector<int>& order) {
  std::vector<char> in_ideal(cs.points.size(), 0);
  std::vector<Cut> cuts;
  double time = kBeforeEverything;
  auto push = [&]() {
    Cut c{crossing(cs, in_ideal), time};
    if (c.wires.empty()) return;
    if (!cuts.empty() && cuts.back().wires == c.wires) return;
    cuts.push_back(std::move(c));
  };
  push();
  for (int p : order) {
    in_ideal[p] = 1;
    time = std::max(time, cs.points[p](0));
    push();
  }
  return cuts;
}

void apply_min_output_time(std::vector<Cut>& cuts, std::optional<double> bound) {
  if (!bound) return;
  int last = -1;
  for (size_t i = 0; i < cuts.size(); ++i)
    if (cuts[i].time < *bound) last = static_cast<int>(i);
  if (last > 0) cuts.erase(cuts.begin(), cuts.begin() + last);
}

std::vector<std::vector<int>> pattern_of(const std::vector<Cut>& cuts) {
  std::vector<std::vector<int>> key;
  for (const auto& c : cuts) key.push_back(c.wires);
  return key;
}

void enumerate_extensions(const CausalSet& cs, std::vector<int>& order,
                          std::vector<char>& used,
                          const FoliationOptions& opt,
                          std::map<std::vector<std::vector<int>>, Foliation>& seen) {
  const int n = static_cast<int>(cs.points.size());
  if (static_cast<int>(order.size()) == n) {
    auto cuts = cuts_along(cs, order);
    apply_min_output_time(cuts, opt.min_output_time);
    if (cuts.empty()) return;
    auto key = pattern_of(cuts);
    seen.emplace(std::move(key), Foliation{std::move(cuts)});
    return;
  }
  for (int p = 0; p < n; ++p) {
    if (used[p]) continue;
    bool minimal = true;
    for (int q = 0; q < n && minimal; ++q)
      if (!used[q] && cs.precedes[q][p]) minimal = false;
    if (!minimal) continue;
    used[p] = 1;
    order.push_back(p);
    enumerate_extensions(cs, order, used, opt, seen);
    order.pop_back();
    used[p] = 0;
  }
}

}  // namespace

std::vector<Foliation> generate_foliations(const CausalSet& cs,
                                           const FoliationOptions& opt) {
  const int n = static_cast<int>(cs.points.size());
  if (n == 0 || cs.wires.empty()) throw NoFoliation("causal set has no wires");

  std::map<std::vector<std::vector<int>>, Foliation> seen;
  if (n <= opt.exhaustive_limit) {
    std::vector<int> order;
    std::vector<char> used(n, 0);
    enumerate_extensions(cs, order, used, opt, seen);
  } else {
    std::mt19937_64 rng(opt.seed);
    for (int attempt = 0;
         attempt < opt.sample_attempts &&
         static_cast<int>(seen.size()) < opt.max_foliations;
         ++attempt) {
      std::vector<int> order;
      std::vector<char> used(n, 0);
      for (int step = 0; step < n; ++step) {
        std::vector<int> minimal;
        for (int p = 0; p < n; ++p) {
          if (used[p]) continue;
          bool ok = true;
          for (int q = 0; q < n && ok; ++q)
            if (!used[q] && cs.precedes[q][p]) ok = false;
          if (ok) minimal.push_back(p);
        }
        const int pick = minimal[std::uniform_int_distribution<int>(
            0, static_cast<int>(minimal.size()) - 1)(rng)];
        used[pick] = 1;
        order.push_back(pick);
      }
      auto cuts = cuts_along(cs, order);
      apply_min_output_time(cuts, opt.min_output_time);
      if (!cuts.empty()) {
        auto key = pattern_of(cuts);
        seen.emplace(std::move(key), Foliation{std::move(cuts)});
      }
    }
  }

  std::vector<Foliation> out;
  for (auto& [key, fol] : seen) {
    out.push_back(std::move(fol));
    if (static_cast<int>(out.size()) >= opt.max_foliations) break;
  }
  if (out.empty()) throw NoFoliation("no valid cut sequence exists");
  return out;
}

bool tau_gauge_equivalent(const TauField& t1, const TauField& t2,
                          const std::vector<Eigen::Vector2d>& sample_points) {
  for (const auto& p : sample_points) {
    const Eigen::Vector2d a = t1(p);
    const Eigen::Vector2d b = t2(p);
    if (std::abs(a(0)) <= std::abs(a(1)) || std::abs(b(0)) <= std::abs(b(1)))
      return false;
    if ((a(0) > 0.0) != (b(0) > 0.0)) return false;
  }
  return true;
}

}  // namespace optensor
