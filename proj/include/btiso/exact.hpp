#pragma once

// Exact rational arithmetic for the hull kernel. Used for golden volumes on
// rational inputs; the main code path stays in double precision.

#include <stdexcept>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/hull.hpp"
#include "btiso/linalg.hpp"

namespace btiso {

/// Rational from a decimal-free fraction p/q.
inline Rational rational(long long p, long long q = 1) { return Rational(p) / Rational(q); }

/// Exact volume of the hull of `points`, which must span R^n.
inline Rational exact_hull_volume(const std::vector<std::vector<Rational>>& points) {
  if (points.empty()) throw InputError("exact_hull_volume: no points");
  const std::size_t n = points[0].size();
  for (const auto& p : points) {
    if (p.size() != n) throw InputError("exact_hull_volume: dimension mismatch");
  }
  std::vector<std::vector<Rational>> pts = points;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (n == 0) return Rational(1);
  const auto basis = detail::affine_basis(pts, Rational(0));
  if (basis.size() != n + 1) throw DegenerateError("exact_hull_volume: points are not full-dimensional");
  return detail::full_dim_hull(pts, basis, Rational(1)).volume;
}

}  // namespace btiso
