#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/hull.hpp"
#include "btiso/index_set.hpp"
#include "btiso/linalg.hpp"

namespace btiso {

using Point = std::vector<double>;

inline constexpr int kMaxAmbient = 8;

/// <a, x> <= b. Normals produced by the hull are unit vectors.
struct Halfspace {
  Point a;
  double b = 0.0;
};

/// Halfspace description. Flat bodies also carry equalities <a, x> = b that pin
/// the affine hull.
struct HPolytope {
  int ambient_dim = 0;
  std::vector<Halfspace> rows;
  std::vector<Halfspace> equalities;
  double scale = 1.0;  // length scale of the described body, used for tolerances

  bool contains(const Point& x, double tol) const {
    for (const auto& r : rows) {
      if (linalg::dot(r.a, x) - r.b > tol) return false;
    }
    for (const auto& e : equalities) {
      if (std::abs(linalg::dot(e.a, x) - e.b) > tol) return false;
    }
    return true;
  }
};

/// Fan triangulation: each simplex lists affine_dim+1 indices into `points`.
struct SimplicialDecomposition {
  std::vector<Point> points;
  std::vector<std::vector<int>> simplices;
  std::vector<double> volumes;
  double total_volume = 0.0;
  bool degenerate = false;  // true when the body is lower dimensional
};

namespace detail {

struct PolytopeData {
  int ambient_dim = 0;
  int affine_dim = 0;
  std::vector<Point> vertices;
  HPolytope hrep;
  SimplicialDecomposition tri;
  double volume = 0.0;  // relative to the affine hull
  double scale = 0.0;   // bounding-box diagonal
};

inline double bbox_diagonal(const std::vector<Point>& pts) {
  if (pts.empty()) return 0.0;
  const std::size_t n = pts[0].size();
  double sq = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double lo = pts[0][c];
    double hi = pts[0][c];
    for (const auto& p : pts) {
      lo = std::min(lo, p[c]);
      hi = std::max(hi, p[c]);
    }
    sq += (hi - lo) * (hi - lo);
  }
  return std::sqrt(sq);
}

/// Sorts and merges points closer than `tol` (max-norm).
inline std::vector<Point> merge_close(std::vector<Point> pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<Point> out;
  for (auto& p : pts) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (p[0] - (*it)[0] > tol) break;
      double dist = 0.0;
      for (std::size_t c = 0; c < p.size(); ++c) dist = std::max(dist, std::abs(p[c] - (*it)[c]));
      if (dist <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

inline std::shared_ptr<const PolytopeData> build_polytope(std::vector<Point> points) {
  if (points.empty()) throw InputError("convex hull of an empty point set");
  const std::size_t n = points[0].size();
  if (n == 0 || n > static_cast<std::size_t>(kMaxAmbient)) {
    throw CapacityError("ambient dimension must lie in [1, 8], got " + std::to_string(n));
  }
  for (const auto& p : points) {
    if (p.size() != n) throw InputError("points have mismatched dimensions");
    for (double v : p) {
      if (!std::isfinite(v)) throw InputError("non-finite coordinate");
    }
  }
  auto data = std::make_shared<PolytopeData>();
  data->ambient_dim = static_cast<int>(n);
  const double raw_scale = bbox_diagonal(points);
  auto pts = merge_close(std::move(points), 1e-10 * raw_scale);
  data->scale = raw_scale;
  data->hrep.ambient_dim = static_cast<int>(n);
  data->hrep.scale = raw_scale > 0 ? raw_scale : 1.0;

  std::vector<Point> dirs;
  const auto basis = pts.size() == 1 ? std::vector<int>{0} : affine_basis(pts, 1e-10 * raw_scale, &dirs);
  const int k = static_cast<int>(basis.size()) - 1;
  data->affine_dim = k;
  const Point origin = pts[basis[0]];

  // Orthonormal frame of the affine hull (rows of q).
  std::vector<Point> q;
  for (auto d : dirs) {
    for (const auto& e : q) {
      const double f = linalg::dot(d, e);
      for (std::size_t c = 0; c < n; ++c) d[c] -= f * e[c];
    }
    const double len = linalg::norm(d);
    for (auto& v : d) v /= len;
    q.push_back(std::move(d));
  }
  // Orthonormal complement, for the equalities of flat bodies.
  if (k < static_cast<int>(n)) {
    std::vector<Point> frame = q;
    for (std::size_t i = 0; i < n && frame.size() < n; ++i) {
      Point e(n, 0.0);
      e[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& f : frame) {
          const double c = linalg::dot(e, f);
          for (std::size_t j = 0; j < n; ++j) e[j] -= c * f[j];
        }
      }
      const double len = linalg::norm(e);
      if (len < 1e-6) continue;
      for (auto& v : e) v /= len;
      frame.push_back(e);
      data->hrep.equalities.push_back({e, linalg::dot(e, origin)});
    }
  }

  if (k == 0) {
    data->vertices = {origin};
    data->volume = 1.0;  // counting measure of a single point
    data->tri.points = {origin};
    data->tri.simplices = {{0}};
    data->tri.volumes = {1.0};
    data->tri.total_volume = 1.0;
    data->tri.degenerate = static_cast<int>(n) > 0;
    return data;
  }

  const bool full = k == static_cast<int>(n);
  std::vector<Point> local;
  local.reserve(pts.size());
  if (full) {
    local = pts;
  } else {
    for (const auto& p : pts) {
      const Point d = linalg::sub(p, origin);
      Point y(k);
      for (int r = 0; r < k; ++r) y[r] = linalg::dot(q[r], d);
      local.push_back(std::move(y));
    }
  }
  auto to_ambient = [&](const Point& y) {
    if (full) return y;
    Point x = origin;
    for (int r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < n; ++c) x[c] += y[r] * q[r][c];
    }
    return x;
  };

  const auto hull = full_dim_hull<double>(local, basis, raw_scale);
  for (int v : hull.extreme) data->vertices.push_back(pts[v]);
  for (const auto& f : hull.facets) {
    if (full) {
      data->hrep.rows.push_back({f.normal, f.offset});
    } else {
      Point a(n, 0.0);
      for (int r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < n; ++c) a[c] += f.normal[r] * q[r][c];
      }
      data->hrep.rows.push_back({a, f.offset + linalg::dot(a, origin)});
    }
  }
  data->volume = hull.volume;

  // Triangulation in ambient coordinates; the apex is stored last.
  std::vector<int> remap(pts.size(), -1);
  for (const auto& simplex : hull.fan) {
    std::vector<int> ids;
    for (int v : simplex) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(data->tri.points.size());
        data->tri.points.push_back(pts[v]);
      }
      ids.push_back(remap[v]);
    }
    data->tri.simplices.push_back(std::move(ids));
  }
  const int apex = static_cast<int>(data->tri.points.size());
  data->tri.points.push_back(to_ambient(hull.interior));
  for (auto& s : data->tri.simplices) s.push_back(apex);
  data->tri.volumes = hull.fan_volumes;
  data->tri.total_volume = hull.volume;
  data->tri.degenerate = !full;
  return data;
}

}  // namespace detail

/// Convex polytope given by its extreme points. Immutable; copies share state.
class VPolytope {
 public:
  VPolytope() = default;
  explicit VPolytope(std::vector<Point> points) : data_(detail::build_polytope(std::move(points))) {}

  bool valid() const { return data_ != nullptr; }
  int ambient_dim() const { return data_->ambient_dim; }
  int affine_dim() const { return data_->affine_dim; }
  const std::vector<Point>& vertices() const { return data_->vertices; }
  const HPolytope& hrep() const { return data_->hrep; }
  const SimplicialDecomposition& triangulation() const { return data_->tri; }
  /// Volume relative to the affine hull (a point has volume 1).
  double volume() const { return data_->volume; }
  /// d-dimensional measure: 0 when the body is flatter than d.
  double measure(int d) const {
    if (data_->affine_dim < d) return 0.0;
    if (data_->affine_dim > d) return std::numeric_limits<double>::infinity();
    return data_->volume;
  }
  double scale() const { return data_->scale; }
  bool full_dimensional() const { return data_->affine_dim == data_->ambient_dim; }

  Point vertex_centroid() const {
    Point c(ambient_dim(), 0.0);
    for (const auto& v : vertices()) {
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i];
    }
    for (auto& x : c) x /= static_cast<double>(vertices().size());
    return c;
  }

  bool contains(const Point& x, double rel_tol = 1e-9) const {
    return data_->hrep.contains(x, rel_tol * std::max(data_->scale, 1e-300));
  }

 private:
  std::shared_ptr<const detail::PolytopeData> data_;
};

struct Hull {
  VPolytope vpoly;
  HPolytope hpoly;
  SimplicialDecomposition triangulation;
};

inline Hull convex_hull(std::vector<Point> points) {
  VPolytope v(std::move(points));
  return {v, v.hrep(), v.triangulation()};
}

inline double volume(const VPolytope& p) { return p.volume(); }

/// Coordinate projection onto the (0-based) coordinates `coords`, kept in that order.
inline VPolytope project_coords(const VPolytope& p, const std::vector<int>& coords) {
  if (coords.empty()) throw InputError("projection onto the zero subspace");
  std::vector<Point> pts;
  pts.reserve(p.vertices().size());
  for (const auto& v : p.vertices()) {
    Point q;
    q.reserve(coords.size());
    for (int c : coords) {
      if (c < 0 || c >= p.ambient_dim()) throw InputError("projection coordinate out of range");
      q.push_back(v[c]);
    }
    pts.push_back(std::move(q));
  }
  return VPolytope(std::move(pts));
}

inline std::vector<int> zero_based(const IndexSet& s) {
  std::vector<int> out;
  for (int e : s.elements()) out.push_back(e - 1);
  return out;
}

/// Orthogonal projection onto H_tau, expressed in the coordinates of tau (ascending).
inline VPolytope project(const VPolytope& p, const IndexSet& tau) {
  if (tau.empty()) throw InputError("projection onto an empty index set");
  for (int e : tau.elements()) {
    if (e > p.ambient_dim()) throw InputError("index set exceeds ambient dimension");
  }
  return project_coords(p, zero_based(tau));
}

namespace detail {

/// Vertices of {lambda : A lambda <= b} (bounded) by exhaustive d-subsets of rows.
inline std::vector<Point> enumerate_vertices(const std::vector<Halfspace>& rows, int d, double scale) {
  const double feas_tol = 1e-11 * scale;
  const std::size_t f = rows.size();
  std::vector<Point> found;
  if (static_cast<int>(f) < d) return found;
  std::vector<int> pick(d);
  for (int i = 0; i < d; ++i) pick[i] = i;
  linalg::Mat<double> a(d, Point(d));
  Point b(d);
  while (true) {
    for (int r = 0; r < d; ++r) {
      a[r] = rows[pick[r]].a;
      b[r] = rows[pick[r]].b;
    }
    if (auto x = linalg::solve(a, b, 1e-12)) {
      bool ok = true;
      for (const auto& row : rows) {
        if (linalg::dot(row.a, *x) - row.b > feas_tol) {
          ok = false;
          break;
        }
      }
      if (ok) found.push_back(std::move(*x));
    }
    int i = d - 1;
    while (i >= 0 && pick[i] == static_cast<int>(f) - d + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
  }
  return found;
}

}  // namespace detail

/// K ∩ (base + H_tau) in tau coordinates. The tau-entries of `base` are ignored.
/// Returns nullopt when the intersection is empty.
inline std::optional<VPolytope> slice(const HPolytope& p, const Point& base, const IndexSet& tau) {
  if (tau.empty()) throw InputError("slice along an empty index set");
  if (tau.size() > 4) throw CapacityError("slices are limited to |tau| <= 4");
  if (static_cast<int>(base.size()) != p.ambient_dim) throw InputError("slice base has wrong dimension");
  const int d = tau.size();
  const auto coords = zero_based(tau);
  std::vector<bool> in_tau(p.ambient_dim, false);
  for (int c : coords) in_tau[c] = true;
  const double tol = 1e-11 * p.scale;

  std::vector<Halfspace> reduced;
  auto add = [&](const Point& a, double b) {
    Point ar(d);
    double rhs = b;
    double norm_sq = 0.0;
    for (int i = 0; i < p.ambient_dim; ++i) {
      if (!in_tau[i]) rhs -= a[i] * base[i];
    }
    for (int r = 0; r < d; ++r) {
      ar[r] = a[coords[r]];
      norm_sq += ar[r] * ar[r];
    }
    const double len = std::sqrt(norm_sq);
    if (len <= 1e-12) {
      return rhs >= -tol;
    }
    for (auto& v : ar) v /= len;
    rhs /= len;
    for (const auto& h : reduced) {
      bool same = std::abs(h.b - rhs) <= tol;
      for (int r = 0; same && r < d; ++r) same = std::abs(h.a[r] - ar[r]) <= 1e-12;
      if (same) return true;
    }
    reduced.push_back({std::move(ar), rhs});
    return true;
  };
  for (const auto& r : p.rows) {
    if (!add(r.a, r.b)) return std::nullopt;
  }
  for (const auto& e : p.equalities) {
    Point neg = e.a;
    for (auto& v : neg) v = -v;
    if (!add(e.a, e.b) || !add(neg, -e.b)) return std::nullopt;
  }
  auto pts = detail::enumerate_vertices(reduced, d, p.scale);
  if (pts.empty()) return std::nullopt;
  // Vertex noise follows the scale of p, not of the (possibly tiny) slice.
  return VPolytope(detail::merge_close(std::move(pts), 1e-11 * p.scale));
}

/// Same section computed from the vertices. A vertex of the section is a
/// convex combination of at most codim + 1 body vertices whose projections
/// onto the complement of tau contain the base point, so small subsets of the
/// vertex list are enough. Much cheaper than the halfspace route in low
/// codimension.
inline std::optional<VPolytope> slice(const VPolytope& p, const Point& base, const IndexSet& tau) {
  if (tau.empty()) throw InputError("slice along an empty index set");
  if (tau.size() > 4) throw CapacityError("slices are limited to |tau| <= 4");
  if (static_cast<int>(base.size()) != p.ambient_dim()) throw InputError("slice base has wrong dimension");
  const auto coords = zero_based(tau);
  const auto perp = zero_based(tau.complement());
  const int d = static_cast<int>(coords.size());
  const int c = static_cast<int>(perp.size());
  const auto& verts = p.vertices();
  if (c == 0) return p;
  const int m = static_cast<int>(verts.size());
  const double tol = 1e-11 * p.scale();

  std::vector<Point> q(m, Point(c));
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < c; ++r) q[i][r] = verts[i][perp[r]];
  }
  Point y(c);
  for (int r = 0; r < c; ++r) y[r] = base[perp[r]];

  std::vector<Point> found;
  std::vector<int> pick;
  // Barycentric weights of y in the simplex spanned by q[pick]; skips
  // affinely dependent picks, which a smaller subset already covers.
  using Small = std::array<double, kMaxAmbient + 1>;
  auto try_pick = [&]() {
    const int s = static_cast<int>(pick.size());
    const Point& q0 = q[pick[0]];
    std::array<Small, kMaxAmbient + 1> cols{};   // orthonormalised differences
    std::array<Small, kMaxAmbient + 1> r_mat{};  // upper triangular factor
    for (int j = 1; j < s; ++j) {
      Small& col = cols[j - 1];
      double len0 = 0.0;
      for (int t = 0; t < c; ++t) {
        col[t] = q[pick[j]][t] - q0[t];
        len0 += col[t] * col[t];
      }
      len0 = std::sqrt(len0);
      for (int k = 0; k < j - 1; ++k) {
        double proj = 0.0;
        for (int t = 0; t < c; ++t) proj += cols[k][t] * col[t];
        r_mat[k][j - 1] = proj;
        for (int t = 0; t < c; ++t) col[t] -= proj * cols[k][t];
      }
      double len = 0.0;
      for (int t = 0; t < c; ++t) len += col[t] * col[t];
      len = std::sqrt(len);
      if (!(len > 1e-9 * len0) || !(len0 > 1e-13 * p.scale())) return;
      r_mat[j - 1][j - 1] = len;
      for (int t = 0; t < c; ++t) col[t] /= len;
    }
    Small rhs{};
    for (int t = 0; t < c; ++t) rhs[t] = y[t] - q0[t];
    Small mu{};
    for (int k = s - 2; k >= 0; --k) {
      double acc = 0.0;
      for (int t = 0; t < c; ++t) acc += cols[k][t] * rhs[t];
      for (int j = k + 1; j < s - 1; ++j) acc -= r_mat[k][j] * mu[j];
      mu[k] = acc / r_mat[k][k];
    }
    double lambda0 = 1.0;
    Small fit{};
    for (int t = 0; t < c; ++t) fit[t] = q0[t] - y[t];
    for (int j = 1; j < s; ++j) {
      if (mu[j - 1] < -1e-12) return;
      lambda0 -= mu[j - 1];
      for (int t = 0; t < c; ++t) fit[t] += mu[j - 1] * (q[pick[j]][t] - q0[t]);
    }
    if (lambda0 < -1e-12) return;
    double miss = 0.0;
    for (int t = 0; t < c; ++t) miss += fit[t] * fit[t];
    if (std::sqrt(miss) > tol) return;
    Point x(d);
    for (int r = 0; r < d; ++r) {
      double acc = std::max(lambda0, 0.0) * verts[pick[0]][coords[r]];
      for (int j = 1; j < s; ++j) acc += std::max(mu[j - 1], 0.0) * verts[pick[j]][coords[r]];
      x[r] = acc;
    }
    found.push_back(std::move(x));
  };
  for (int s = 1; s <= std::min(c + 1, m); ++s) {
    pick.resize(s);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      try_pick();
      int i = s - 1;
      while (i >= 0 && pick[i] == m - s + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  if (found.empty()) return std::nullopt;
  return VPolytope(detail::merge_close(std::move(found), 1e-11 * p.scale()));
}

/// Vertex enumeration of a bounded halfspace description.
inline VPolytope vertices_of(const HPolytope& h) {
  if (h.ambient_dim > 4 && h.rows.size() > 40) {
    throw CapacityError("halfspace input too large for exhaustive vertex enumeration");
  }
  auto pts = detail::enumerate_vertices(h.rows, h.ambient_dim, h.scale);
  if (pts.empty()) throw InputError("halfspace description is empty or unbounded");
  return VPolytope(std::move(pts));
}

inline VPolytope minkowski_sum(const VPolytope& a, const VPolytope& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("Minkowski sum of mismatched dimensions");
  std::vector<Point> pts;
  pts.reserve(a.vertices().size() * b.vertices().size());
  for (const auto& u : a.vertices()) {
    for (const auto& v : b.vertices()) {
      Point s(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) s[i] = u[i] + v[i];
      pts.push_back(std::move(s));
    }
  }
  return VPolytope(std::move(pts));
}

/// v -> t v + z for every vertex.
inline VPolytope scale_translate(const VPolytope& a, double t, const Point& z) {
  if (!(t >= 0.0)) throw InputError("scale factor must be nonnegative");
  if (static_cast<int>(z.size()) != a.ambient_dim()) throw InputError("translation has wrong dimension");
  std::vector<Point> pts;
  for (const auto& v : a.vertices()) {
    Point w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = t * v[i] + z[i];
    pts.push_back(std::move(w));
  }
  return VPolytope(std::move(pts));
}

namespace detail {

/// Largest amount by which a vertex of `a` leaves `b`.
inline double protrusion(const VPolytope& a, const VPolytope& b, const Point& shift_b) {
  double worst = 0.0;
  const auto& h = b.hrep();
  for (const auto& v : a.vertices()) {
    for (const auto& r : h.rows) worst = std::max(worst, linalg::dot(r.a, v) - r.b - linalg::dot(r.a, shift_b));
    for (const auto& e : h.equalities) {
      worst = std::max(worst, std::abs(linalg::dot(e.a, v) - e.b - linalg::dot(e.a, shift_b)));
    }
  }
  return worst;
}

}  // namespace detail

struct TranslationMatch {
  bool equal = false;
  Point shift;      // add to B to land on A
  double distance;  // two-sided protrusion distance after the shift
};

/// Tests A = B + z with z the difference of vertex centroids. The distance is the
/// largest facet-normal protrusion of either body out of the other.
inline TranslationMatch equal_up_to_translation(const VPolytope& a, const VPolytope& b, double tol) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("comparison of mismatched dimensions");
  const Point ca = a.vertex_centroid();
  const Point cb = b.vertex_centroid();
  Point z = linalg::sub(ca, cb);
  Point neg(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) neg[i] = -z[i];
  const double d = std::max(detail::protrusion(a, b, z), detail::protrusion(b, a, neg));
  return {d <= tol, z, d};
}

/// min{lambda >= 0 : x in lambda P}. Strict mode requires the origin in the
/// relative interior; lenient mode also accepts it on the relative boundary and
/// returns +inf for directions that leave P immediately.
inline double minkowski_functional(const VPolytope& p, const Point& x, bool lenient = false) {
  if (static_cast<int>(x.size()) != p.ambient_dim()) throw InputError("functional argument has wrong dimension");
  const auto& h = p.hrep();
  const double tol = 1e-10 * std::max(p.scale(), 1e-300);
  double xnorm = 0.0;
  for (double v : x) xnorm = std::max(xnorm, std::abs(v));
  for (const auto& e : h.equalities) {
    if (std::abs(e.b) > tol) throw InputError("origin is outside the affine hull");
    if (std::abs(linalg::dot(e.a, x)) > 1e-9 * std::max(xnorm, 1.0)) {
      throw InputError("argument is outside the affine hull");
    }
  }
  double value = 0.0;
  for (const auto& r : h.rows) {
    const double ax = linalg::dot(r.a, x);
    if (r.b <= tol) {
      if (r.b < -tol || !lenient) throw InputError("origin is not interior to the body");
      if (ax > 1e-12 * std::max(xnorm, 1e-300)) return std::numeric_limits<double>::infinity();
      continue;
    }
    value = std::max(value, ax / r.b);
  }
  return value;
}

// ---- standard bodies ----

inline VPolytope make_box(const Point& lo, const Point& hi) {
  const std::size_t n = lo.size();
  if (hi.size() != n) throw InputError("box bounds of different lengths");
  std::vector<Point> pts;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Point v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1u ? hi[i] : lo[i];
    pts.push_back(std::move(v));
  }
  return VPolytope(std::move(pts));
}

inline VPolytope make_cube(int n) { return make_box(Point(n, 0.0), Point(n, 1.0)); }

/// conv(±r_i e_i).
inline VPolytope make_cross_polytope(const Point& radii) {
  const std::size_t n = radii.size();
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) {
    for (double sgn : {-1.0, 1.0}) {
      Point v(n, 0.0);
      v[i] = sgn * radii[i];
      pts.push_back(std::move(v));
    }
  }
  return VPolytope(std::move(pts));
}

inline VPolytope make_cross_polytope(int n) { return make_cross_polytope(Point(n, 1.0)); }

/// conv(0, e_1, ..., e_n).
inline VPolytope make_standard_simplex(int n) {
  std::vector<Point> pts{Point(n, 0.0)};
  for (int i = 0; i < n; ++i) {
    Point v(n, 0.0);
    v[i] = 1.0;
    pts.push_back(std::move(v));
  }
  return VPolytope(std::move(pts));
}

/// Places `body` (coordinates `coords`, 0-based) into R^n with zeros elsewhere.
inline std::vector<Point> embed_points(const std::vector<Point>& body, const std::vector<int>& coords, int n) {
  std::vector<Point> out;
  for (const auto& v : body) {
    Point x(n, 0.0);
    for (std::size_t i = 0; i < coords.size(); ++i) x[coords[i]] = v[i];
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace btiso
