#pragma once

// Reference computations used to cross-check the library. Each one takes a
// different route from the code it checks: LP feasibility instead of facets,
// sampling instead of triangulation, plain recursion instead of the pruned
// cover search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "btiso/btiso.hpp"

namespace oracle {

using btiso::IndexSet;
using btiso::Point;

/// x in conv(points) iff some convex weights reproduce x.
inline bool lp_member(const std::vector<Point>& points, const Point& x, double tol = 1e-9) {
  const int k = static_cast<int>(points.size());
  const int d = static_cast<int>(x.size());
  btiso::LinearProgram lp(k);
  for (int i = 0; i < k; ++i) lp.lower[i] = 0.0;
  for (int c = 0; c < d; ++c) {
    std::vector<double> row(k);
    for (int i = 0; i < k; ++i) row[i] = points[i][c];
    lp.add_le(row, x[c] + tol);
    for (auto& v : row) v = -v;
    lp.add_le(row, -x[c] + tol);
  }
  lp.add_eq(std::vector<double>(k, 1.0), 1.0);
  return btiso::lp_solve(lp).status == btiso::LpStatus::optimal;
}

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Hit-or-miss volume over the bounding box of `points`.
inline Estimate mc_volume(const std::vector<Point>& points, const std::function<bool(const Point&)>& inside,
                          std::size_t samples, btiso::Rng& rng) {
  const int d = static_cast<int>(points[0].size());
  Point lo(d, 1e300), hi(d, -1e300);
  for (const auto& p : points) {
    for (int c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  double box = 1.0;
  for (int c = 0; c < d; ++c) box *= hi[c] - lo[c];
  std::size_t hits = 0;
  Point x(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (int c = 0; c < d; ++c) x[c] = rng.uniform(lo[c], hi[c]);
    if (inside(x)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

/// Area of the convex hull of planar points: monotone chain, then the shoelace sum.
inline double planar_hull_area(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0.0;
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  double area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    area += a[0] * b[1] - a[1] * b[0];
  }
  return std::abs(area) / 2.0;
}

/// |det| / d! for a d-simplex given by d + 1 rational vertices.
inline btiso::Rational simplex_volume(const std::vector<std::vector<btiso::Rational>>& v) {
  const int d = static_cast<int>(v.size()) - 1;
  std::vector<std::vector<btiso::Rational>> m(d, std::vector<btiso::Rational>(d));
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m[r][c] = v[r + 1][c] - v[0][c];
  }
  btiso::Rational det(1);
  for (int c = 0; c < d; ++c) {
    int piv = -1;
    for (int r = c; r < d; ++r) {
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return btiso::Rational(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < d; ++r) {
      const btiso::Rational f = m[r][c] / m[c][c];
      for (int k = c; k < d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  if (det < 0) det = -det;
  btiso::Rational fact(1);
  for (int i = 2; i <= d; ++i) fact *= i;
  return det / fact;
}

/// Smallest lambda with x / lambda inside, by bisection on LP membership.
inline double gauge_by_bisection(const std::vector<Point>& points, const Point& x, int iterations = 60) {
  auto inside = [&](double lam) {
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / lam;
    return lp_member(points, y, 1e-12);
  };
  double hi = 1.0;
  while (!inside(hi)) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const double mid = (lo + hi) / 2.0;
    (inside(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Multiplicity vector over the nonempty subsets of [k] (indexed by mask - 1).
using Counts = std::vector<int>;

inline bool is_uniform(const Counts& c, int k, int* s_out = nullptr) {
  int s = -1;
  bool any = false;
  for (int e = 0; e < k; ++e) {
    int cnt = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (((i + 1) >> e) & 1u) cnt += c[i];
    }
    if (s < 0) s = cnt;
    if (cnt != s) return false;
  }
  for (int v : c) any = any || v > 0;
  if (s_out) *s_out = s;
  return any && s > 0;
}

/// True when some nonzero proper sub-multiset is itself uniform.
inline bool splits(const Counts& c, int k) {
  Counts sub(c.size(), 0);
  std::function<bool(std::size_t, bool, bool)> rec = [&](std::size_t i, bool nonzero, bool proper) -> bool {
    if (i == c.size()) return nonzero && proper && is_uniform(sub, k);
    for (int v = 0; v <= c[i]; ++v) {
      sub[i] = v;
      if (rec(i + 1, nonzero || v > 0, proper || v < c[i])) return true;
    }
    sub[i] = 0;
    return false;
  };
  return rec(0, false, false);
}

/// Every irreducible uniform cover of [k] with at most max_m parts and every
/// part used at most max_mult times, as sorted multiplicity vectors.
inline std::set<Counts> irreducible_covers(int k, int max_m, int max_mult) {
  const int types = (1 << k) - 1;
  std::set<Counts> out;
  Counts c(types, 0);
  std::vector<int> load(k, 0);
  for (int s = 1; s * k <= max_m * k; ++s) {
    std::function<void(int, int)> rec = [&](int i, int used) {
      if (i == types) {
        for (int e = 0; e < k; ++e) {
          if (load[e] != s) return;
        }
        if (!splits(c, k)) out.insert(c);
        return;
      }
      const unsigned mask = static_cast<unsigned>(i + 1);
      for (int v = 0; v <= max_mult && used + v <= max_m; ++v) {
        bool ok = true;
        for (int e = 0; e < k; ++e) {
          if ((mask >> e) & 1u) {
            load[e] += v;
            ok = ok && load[e] <= s;
          }
        }
        if (ok) {
          c[i] = v;
          rec(i + 1, used + v);
        }
        for (int e = 0; e < k; ++e) {
          if ((mask >> e) & 1u) load[e] -= v;
        }
        c[i] = 0;
        if (!ok) break;
      }
    };
    rec(0, 0);
  }
  return out;
}

inline Counts counts_of(const btiso::Cover& c, int k) {
  Counts out((1 << k) - 1, 0);
  for (const auto& p : c.parts) ++out[p.bits() - 1];
  return out;
}

/// Random hull of `count` points drawn from a ball, rescaled per axis.
inline btiso::VPolytope random_hull(btiso::Rng& rng, int n, int count) {
  std::vector<Point> pts;
  for (int i = 0; i < count; ++i) {
    Point x = btiso::uniform_in_ball(rng, n);
    for (int c = 0; c < n; ++c) x[c] *= 0.5 + c * 0.4;
    pts.push_back(x);
  }
  return btiso::VPolytope(pts);
}

}  // namespace oracle
