#pragma once

// Beneath-beyond convex hull for point sets that are full-dimensional in their
// own coordinates. Templated on the scalar so the same kernel runs in double
// precision (tolerance based) and in exact rational arithmetic (see exact.hpp).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <type_traits>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/linalg.hpp"

namespace btiso::detail {

using linalg::Vec;

template <class T>
struct HullFacet {
  Vec<T> normal;  // outward; unit length in floating point mode
  T offset;       // <normal, x> <= offset
  std::vector<int> vertices;
};

template <class T>
struct FullDimHull {
  int dim = 0;
  std::vector<int> extreme;           // indices of extreme points, ascending
  std::vector<HullFacet<T>> facets;   // merged (one per geometric facet)
  Vec<T> interior;                    // apex of the triangulation fan
  std::vector<std::vector<int>> fan;  // boundary simplices; each joined with `interior`
  std::vector<T> fan_volumes;
  T volume = T(0);
};

struct Tolerances {
  double merge = 1e-10;     // relative to diameter
  double visible = 1e-10;   // relative to diameter
  double residual = 1e-8;   // post-check, relative to diameter
};

template <class T>
T factorial_of(int k) {
  T f(1);
  for (int i = 2; i <= k; ++i) f *= T(i);
  return f;
}

/// Greedy affinely independent subset: starts at the lexicographically smallest
/// point and repeatedly adds the point farthest from the current affine span.
template <class T>
std::vector<int> affine_basis(const std::vector<Vec<T>>& pts, const T& tol,
                              std::vector<Vec<T>>* directions = nullptr) {
  std::vector<int> chosen;
  if (pts.empty()) return chosen;
  int first = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    if (pts[i] < pts[first]) first = i;
  }
  chosen.push_back(first);
  std::vector<Vec<T>> ortho;
  std::vector<T> ortho_sq;
  const std::size_t dim = pts[0].size();
  while (ortho.size() < dim) {
    int best = -1;
    T best_sq(0);
    Vec<T> best_res;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      Vec<T> r = linalg::sub(pts[i], pts[first]);
      for (std::size_t q = 0; q < ortho.size(); ++q) {
        const T f = linalg::dot(r, ortho[q]) / ortho_sq[q];
        for (std::size_t c = 0; c < dim; ++c) r[c] -= f * ortho[q][c];
      }
      const T sq = linalg::dot(r, r);
      if (best < 0 || sq > best_sq) {
        best = i;
        best_sq = sq;
        best_res = std::move(r);
      }
    }
    const bool flat = ScalarTraits<T>::exact ? best_sq == T(0) : !(best_sq > tol * tol);
    if (flat) break;
    chosen.push_back(best);
    ortho.push_back(best_res);
    ortho_sq.push_back(best_sq);
  }
  if (directions != nullptr) *directions = ortho;
  return chosen;
}

template <class T>
class BeneathBeyond {
 public:
  BeneathBeyond(const std::vector<Vec<T>>& pts, T eps, T null_tol)
      : pts_(pts), dim_(static_cast<int>(pts[0].size())), eps_(eps), null_tol_(null_tol) {}

  /// Runs the incremental construction; `simplex` holds dim+1 affinely independent indices.
  void run(const std::vector<int>& simplex, const std::vector<int>& order) {
    interior_.assign(dim_, T(0));
    for (int idx : simplex) {
      for (int c = 0; c < dim_; ++c) interior_[c] += pts_[idx][c];
    }
    for (int c = 0; c < dim_; ++c) interior_[c] /= T(dim_ + 1);
    for (std::size_t skip = 0; skip < simplex.size(); ++skip) {
      std::vector<int> verts;
      for (std::size_t j = 0; j < simplex.size(); ++j) {
        if (j != skip) verts.push_back(simplex[j]);
      }
      add_facet(std::move(verts));
    }
    for (int p : order) insert(p);
  }

  const Vec<T>& interior() const { return interior_; }
  std::vector<HullFacet<T>> alive_facets() const {
    std::vector<HullFacet<T>> out;
    for (const auto& f : facets_) {
      if (f.alive) out.push_back({f.normal, f.offset, f.vertices});
    }
    return out;
  }

 private:
  struct Facet {
    Vec<T> normal;
    T offset;
    std::vector<int> vertices;  // sorted
    bool alive = true;
  };

  void add_facet(std::vector<int> verts) {
    std::sort(verts.begin(), verts.end());
    linalg::Mat<T> m;
    for (std::size_t j = 1; j < verts.size(); ++j) m.push_back(linalg::sub(pts_[verts[j]], pts_[verts[0]]));
    auto normal = linalg::null_vector(m, static_cast<std::size_t>(dim_), null_tol_);
    if (!normal) throw DegenerateError("hull: degenerate facet");
    if constexpr (!ScalarTraits<T>::exact) {
      const double len = linalg::norm(*normal);
      if (!(len > 0)) throw DegenerateError("hull: zero facet normal");
      for (auto& v : *normal) v /= len;
    }
    T offset = linalg::dot(*normal, pts_[verts[0]]);
    if (linalg::dot(*normal, interior_) > offset) {
      for (auto& v : *normal) v = -v;
      offset = -offset;
    }
    if constexpr (ScalarTraits<T>::exact) {
      if (linalg::dot(*normal, interior_) == offset) throw DegenerateError("hull: flat initial simplex");
    }
    facets_.push_back({std::move(*normal), offset, std::move(verts), true});
  }

  void insert(int p) {
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < facets_.size(); ++f) {
      if (!facets_[f].alive) continue;
      const T d = linalg::dot(facets_[f].normal, pts_[p]) - facets_[f].offset;
      if (d > eps_) visible.push_back(f);
    }
    if (visible.empty()) return;
    std::map<std::vector<int>, int> ridge_count;
    for (std::size_t f : visible) {
      const auto& v = facets_[f].vertices;
      for (std::size_t skip = 0; skip < v.size(); ++skip) {
        std::vector<int> ridge;
        ridge.reserve(v.size() - 1);
        for (std::size_t j = 0; j < v.size(); ++j) {
          if (j != skip) ridge.push_back(v[j]);
        }
        ++ridge_count[ridge];
      }
    }
    for (std::size_t f : visible) facets_[f].alive = false;
    for (const auto& [ridge, count] : ridge_count) {
      if (count != 1) continue;
      std::vector<int> verts = ridge;
      verts.push_back(p);
      add_facet(std::move(verts));
    }
  }

  const std::vector<Vec<T>>& pts_;
  int dim_;
  T eps_;
  T null_tol_;
  Vec<T> interior_;
  std::vector<Facet> facets_;
};

template <class T>
bool same_hyperplane(const HullFacet<T>& a, const HullFacet<T>& b, const T& tol) {
  if constexpr (ScalarTraits<T>::exact) {
    // normals are scaled so the first nonzero entry has absolute value 1
    return a.normal == b.normal && a.offset == b.offset;
  } else {
    for (std::size_t i = 0; i < a.normal.size(); ++i) {
      if (linalg::abs_of(a.normal[i] - b.normal[i]) > 1e-9) return false;
    }
    return linalg::abs_of(a.offset - b.offset) <= tol;
  }
}

template <class T>
void canonical_scale(HullFacet<T>& f) {
  if constexpr (ScalarTraits<T>::exact) {
    for (const auto& v : f.normal) {
      if (v != T(0)) {
        const T s = linalg::abs_of(v);
        for (auto& w : f.normal) w /= s;
        f.offset /= s;
        return;
      }
    }
  }
}

FullDimHull<double> exact_core_fallback(const std::vector<Vec<double>>& pts, const std::vector<int>& simplex);

template <class T>
FullDimHull<T> full_dim_hull_core(const std::vector<Vec<T>>& pts, const std::vector<int>& simplex,
                                  const T& scale, const Tolerances& tol) {
  FullDimHull<T> out;
  const int dim = static_cast<int>(pts[0].size());
  out.dim = dim;
  const T eps = ScalarTraits<T>::exact ? T(0) : T(tol.visible) * scale;
  const T null_tol = ScalarTraits<T>::exact ? T(0) : T(1e-13) * scale;

  if (dim == 1) {
    int lo = 0;
    int hi = 0;
    for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    out.extreme = {std::min(lo, hi), std::max(lo, hi)};
    out.facets.push_back({Vec<T>{T(-1)}, T(-pts[lo][0]), {lo}});
    out.facets.push_back({Vec<T>{T(1)}, pts[hi][0], {hi}});
    out.interior = Vec<T>{(pts[lo][0] + pts[hi][0]) / T(2)};
    out.fan = {{lo}, {hi}};
    out.fan_volumes = {out.interior[0] - pts[lo][0], pts[hi][0] - out.interior[0]};
    out.volume = pts[hi][0] - pts[lo][0];
    return out;
  }

  auto build = [&](const std::vector<int>& order) {
    BeneathBeyond<T> bb(pts, eps, null_tol);
    bb.run(simplex, order);
    return bb;
  };

  // Far points first: extreme points tend to enter before interior ones.
  std::vector<int> rest;
  {
    std::vector<bool> in_simplex(pts.size(), false);
    for (int s : simplex) in_simplex[s] = true;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
      if (!in_simplex[i]) rest.push_back(i);
    }
  }
  Vec<T> centre(dim, T(0));
  for (int s : simplex) {
    for (int c = 0; c < dim; ++c) centre[c] += pts[s][c];
  }
  for (auto& c : centre) c /= T(dim + 1);
  std::vector<T> dist2(pts.size());
  for (int i : rest) {
    const auto d = linalg::sub(pts[i], centre);
    dist2[i] = linalg::dot(d, d);
  }
  std::vector<int> order = rest;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist2[a] > dist2[b]; });

  std::vector<HullFacet<T>> raw;
  Vec<T> interior;
  auto attempt = [&](const std::vector<int>& ord) -> bool {
    try {
      auto bb = build(ord);
      raw = bb.alive_facets();
      interior = bb.interior();
    } catch (const DegenerateError&) {
      return false;
    }
    if constexpr (ScalarTraits<T>::exact) {
      return true;
    } else {
      const T limit = T(tol.residual) * scale;
      for (const auto& p : pts) {
        for (const auto& f : raw) {
          if (linalg::dot(f.normal, p) - f.offset > limit) return false;
        }
      }
      return true;
    }
  };
  if (!attempt(order)) {
    // Retry with lexicographic insertion order as deterministic tie-breaking.
    std::vector<int> lex = rest;
    std::stable_sort(lex.begin(), lex.end(), [&](int a, int b) { return pts[a] < pts[b]; });
    if (!attempt(lex)) {
      // Slivers far below the tolerances (tiny chamfers at a vertex) can
      // defeat both orders; the input doubles are exact rationals, so redo it exactly.
      if constexpr (std::is_same_v<T, double>) return exact_core_fallback(pts, simplex);
      throw DegenerateError("convex hull failed its residual check twice");
    }
  }

  // Fan triangulation from the interior point.
  const T kfact = factorial_of<T>(dim);
  for (const auto& f : raw) {
    linalg::Mat<T> m;
    for (int v : f.vertices) m.push_back(linalg::sub(pts[v], interior));
    const T vol = linalg::abs_of(linalg::determinant(m)) / kfact;
    out.fan.push_back(f.vertices);
    out.fan_volumes.push_back(vol);
    out.volume += vol;
  }
  out.interior = interior;

  // Merge coplanar simplicial facets into geometric facets.
  const T merge_tol = ScalarTraits<T>::exact ? T(0) : T(1e-9) * scale;
  for (auto f : raw) {
    canonical_scale(f);
    bool merged = false;
    for (auto& g : out.facets) {
      if (same_hyperplane(f, g, merge_tol)) {
        for (int v : f.vertices) {
          if (std::find(g.vertices.begin(), g.vertices.end(), v) == g.vertices.end()) g.vertices.push_back(v);
        }
        merged = true;
        break;
      }
    }
    if (!merged) out.facets.push_back(f);
  }
  for (auto& g : out.facets) std::sort(g.vertices.begin(), g.vertices.end());

  // A boundary point is extreme iff its incident facet normals span R^dim.
  std::vector<int> candidates;
  for (const auto& g : out.facets) candidates.insert(candidates.end(), g.vertices.begin(), g.vertices.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const T inc_tol = ScalarTraits<T>::exact ? T(0) : T(tol.visible) * scale * T(10);
  for (int v : candidates) {
    linalg::Mat<T> normals;
    for (const auto& g : out.facets) {
      const T d = linalg::dot(g.normal, pts[v]) - g.offset;
      if (linalg::near_zero(d, inc_tol)) normals.push_back(g.normal);
    }
    if (static_cast<int>(normals.size()) < dim) continue;
    if (static_cast<int>(linalg::rank(normals, ScalarTraits<T>::exact ? T(0) : T(1e-9))) == dim) {
      out.extreme.push_back(v);
    }
  }
  // Facet vertex lists keep only extreme points.
  for (auto& g : out.facets) {
    std::vector<int> kept;
    for (int v : g.vertices) {
      if (std::binary_search(out.extreme.begin(), out.extreme.end(), v)) kept.push_back(v);
    }
    g.vertices = std::move(kept);
  }
  return out;
}

inline FullDimHull<double> exact_core_fallback(const std::vector<Vec<double>>& pts,
                                               const std::vector<int>& simplex) {
  std::vector<Vec<Rational>> exact_pts;
  exact_pts.reserve(pts.size());
  for (const auto& p : pts) exact_pts.emplace_back(p.begin(), p.end());
  const auto hull = full_dim_hull_core<Rational>(exact_pts, simplex, Rational(1), Tolerances{});
  auto to_vec = [](const Vec<Rational>& v) {
    Vec<double> out;
    for (const auto& x : v) out.push_back(x.convert_to<double>());
    return out;
  };
  FullDimHull<double> out;
  out.dim = hull.dim;
  out.extreme = hull.extreme;
  for (const auto& f : hull.facets) {
    Vec<double> normal = to_vec(f.normal);
    const double len = linalg::norm(normal);
    for (auto& v : normal) v /= len;
    out.facets.push_back({std::move(normal), f.offset.convert_to<double>() / len, f.vertices});
  }
  out.interior = to_vec(hull.interior);
  out.fan = hull.fan;
  out.fan_volumes = to_vec(hull.fan_volumes);
  out.volume = hull.volume.convert_to<double>();
  return out;
}

/// Hull of points that span their ambient space (`dim` >= 1). `scale` is the
/// point-set diameter used to turn relative tolerances into absolute ones.
///
/// In floating point the cloud is first rounded: rotated into an orthonormal
/// frame of the initial simplex and scaled to unit extent per axis. Hull
/// combinatorics are affine invariant, and needle- or slab-shaped inputs would
/// otherwise fall below the absolute tolerances.
template <class T>
FullDimHull<T> full_dim_hull(const std::vector<Vec<T>>& pts, const std::vector<int>& simplex,
                             const T& scale, const Tolerances& tol = {}) {
  const int dim = static_cast<int>(pts[0].size());
  if constexpr (ScalarTraits<T>::exact) {
    return full_dim_hull_core(pts, simplex, scale, tol);
  } else {
    if (dim == 1) return full_dim_hull_core(pts, simplex, scale, tol);
    const Vec<T>& origin = pts[simplex[0]];
    std::vector<Vec<T>> frame;
    for (std::size_t j = 1; j < simplex.size(); ++j) {
      Vec<T> e = linalg::sub(pts[simplex[j]], origin);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : frame) {
          const T c = linalg::dot(e, q);
          for (int k = 0; k < dim; ++k) e[k] -= c * q[k];
        }
      }
      const T len = linalg::norm(e);
      if (!(len > 0)) return full_dim_hull_core(pts, simplex, scale, tol);
      for (auto& v : e) v /= len;
      frame.push_back(std::move(e));
    }
    std::vector<Vec<T>> local(pts.size(), Vec<T>(dim));
    std::vector<T> lo(dim, T(0)), hi(dim, T(0));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec<T> d = linalg::sub(pts[i], origin);
      for (int k = 0; k < dim; ++k) {
        local[i][k] = linalg::dot(frame[k], d);
        lo[k] = std::min(lo[k], local[i][k]);
        hi[k] = std::max(hi[k], local[i][k]);
      }
    }
    std::vector<T> extent(dim);
    T det = T(1);
    for (int k = 0; k < dim; ++k) {
      extent[k] = hi[k] - lo[k];
      if (!(extent[k] > 0)) return full_dim_hull_core(pts, simplex, scale, tol);
      det *= extent[k];
    }
    for (auto& y : local) {
      for (int k = 0; k < dim; ++k) y[k] /= extent[k];
    }
    auto out = full_dim_hull_core(local, simplex, T(std::sqrt(static_cast<double>(dim))), tol);
    // Back to the input coordinates.
    for (auto& f : out.facets) {
      Vec<T> a(dim, T(0));
      for (int k = 0; k < dim; ++k) {
        const T w = f.normal[k] / extent[k];
        for (int c = 0; c < dim; ++c) a[c] += w * frame[k][c];
      }
      T b = f.offset + linalg::dot(a, origin);
      const T len = linalg::norm(a);
      for (auto& v : a) v /= len;
      f.normal = std::move(a);
      f.offset = b / len;
    }
    Vec<T> interior = origin;
    for (int k = 0; k < dim; ++k) {
      for (int c = 0; c < dim; ++c) interior[c] += out.interior[k] * extent[k] * frame[k][c];
    }
    out.interior = std::move(interior);
    for (auto& v : out.fan_volumes) v *= det;
    out.volume *= det;
    return out;
  }
}

}  // namespace btiso::detail
