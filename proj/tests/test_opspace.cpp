#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "optensor/opspace.hpp"

using namespace optensor;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<int>(v.size()));
  int i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

}  // namespace

TEST_CASE("constant fields give a singleton surface") {
  FieldSample f;
  for (int i = 0; i < 10; ++i) f.scalars[i] = vec({1.0, 2.0});
  CHECK(compute_gamma(f).points.size() == 1);
}

TEST_CASE("distinct values give distinct surface points") {
  FieldSample f;
  f.scalars[0] = vec({0.0});
  f.scalars[1] = vec({1.0});
  CHECK(compute_gamma(f).points.size() == 2);
}

TEST_CASE("surface is invariant under point relabeling") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(-1, 1);
  FieldSample f;
  for (int i = 0; i < 50; ++i) f.scalars[i] = vec({u(rng), u(rng), u(rng)});

  std::vector<int> ids;
  for (const auto& [id, s] : f.scalars) ids.push_back(id);
  std::shuffle(ids.begin(), ids.end(), rng);
  FieldSample g;
  int j = 0;
  for (const auto& [id, s] : f.scalars) g.scalars[ids[j++]] = s;

  CHECK(compute_gamma(f).points == compute_gamma(g).points);
}

TEST_CASE("canonicalization merges values equal to 12 places") {
  FieldSample f;
  f.scalars[0] = vec({1.0});
  f.scalars[1] = vec({1.0 + 1e-14});
  f.scalars[2] = vec({-0.0});
  f.scalars[3] = vec({0.0});
  CHECK(compute_gamma(f).points.size() == 2);
}

TEST_CASE("mismatched scalar counts are rejected") {
  FieldSample f;
  f.scalars[0] = vec({1.0});
  f.scalars[1] = vec({1.0, 2.0});
  CHECK_THROWS_AS(compute_gamma(f), Error);
}

TEST_CASE("region outcomes") {
  FieldSample f;
  f.scalars[0] = vec({0.1, 0.1});
  f.scalars[1] = vec({0.5, 0.5});
  f.scalars[2] = vec({0.9, 0.2});
  const auto g = compute_gamma(f);

  OpRegion all{vec({0, 0}), vec({1, 1})};
  CHECK(region_outcome(g, all).points == g.points);

  OpRegion empty{vec({2, 2}), vec({3, 3})};
  CHECK(region_outcome(g, empty).points.empty());

  OpRegion unit{vec({0, 0}), vec({0.5, 0.5})};
  const auto sel = region_outcome(g, unit);
  // Brute-force filter over the surface.
  std::set<std::vector<double>> want;
  for (const auto& p : g.points)
    if (p[0] >= 0 && p[0] <= 0.5 && p[1] >= 0 && p[1] <= 0.5) want.insert(p);
  CHECK(sel.points == want);
  CHECK(sel.points.size() == 2);
}
