#include "optensor/opspace.hpp"

#include <cmath>

namespace optensor {
namespace {

double canonicalize(double x) {
  const double r = std::round(x * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;  // collapse -0
}

}  // namespace

bool OpRegion::contains(const std::vector<double>& s) const {
  if (static_cast<long>(s.size()) != lo.size() || lo.size() != hi.size())
    throw Error("scalar vector and region dimensions differ");
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i] < lo(i) || s[i] > hi(i)) return false;
  return true;
}

GammaSurface compute_gamma(const FieldSample& f) {
  GammaSurface g;
  long k = -1;
  for (const auto& [id, s] : f.scalars) {
    if (k < 0) k = s.size();
    if (s.size() != k)
      throw Error("field sample has points with differing scalar counts");
    std::vector<double> v(s.size());
    for (long i = 0; i < s.size(); ++i) v[i] = canonicalize(s(i));
    g.points.insert(std::move(v));
  }
  return g;
}

GammaSurface region_outcome(const GammaSurface& g, const OpRegion& r) {
  GammaSurface out;
  for (const auto& s : g.points)
    if (r.contains(s)) out.points.insert(s);
  return out;
}

}  // namespace optensor
