#pragma once

// Integration of vector-valued functions over a full-dimensional polytope.
// Monte Carlo is stratified over the simplices of the polytope's fan
// triangulation; the grid rules cover dimensions one and two.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "btiso/error.hpp"
#include "btiso/parallel.hpp"
#include "btiso/polytope.hpp"
#include "btiso/rng.hpp"

namespace btiso {

struct QuadratureSpec {
  enum class Method { mc, grid };
  Method method = Method::mc;
  std::size_t n_samples = 200'000;
  std::uint64_t seed = 0;
  int grid_level = 24;  // panels per piece (1-d) or subdivisions per triangle edge (2-d)
};

inline std::string to_string(QuadratureSpec::Method m) { return m == QuadratureSpec::Method::mc ? "mc" : "grid"; }

struct QuadratureResult {
  std::vector<double> values;
  linalg::Mat<double> covariance;  // of the estimates; diagonal error proxy for grids
  std::size_t evaluations = 0;

  double standard_error(std::size_t k) const { return std::sqrt(std::max(0.0, covariance[k][k])); }
};

/// f(y, out) writes `outputs` values for the base point y.
using Integrand = std::function<void(const Point&, double*)>;

inline constexpr std::size_t kMaxQuadratureSamples = 50'000'000;

namespace detail {

struct Stratum {
  std::vector<Point> corners;
  double volume;
};

/// Splits the fan simplices by longest-edge bisection until there are at least
/// `target` strata of comparable size.
inline std::vector<Stratum> refine_strata(const SimplicialDecomposition& tri, std::size_t target) {
  std::vector<Stratum> strata;
  for (std::size_t j = 0; j < tri.simplices.size(); ++j) {
    Stratum st{{}, tri.volumes[j]};
    for (int id : tri.simplices[j]) st.corners.push_back(tri.points[id]);
    strata.push_back(std::move(st));
  }
  while (strata.size() < target) {
    std::vector<Stratum> next;
    next.reserve(strata.size() * 2);
    for (auto& st : strata) {
      std::size_t ba = 0, bb = 1;
      double best = -1.0;
      for (std::size_t a = 0; a < st.corners.size(); ++a) {
        for (std::size_t b = a + 1; b < st.corners.size(); ++b) {
          const auto d = linalg::sub(st.corners[a], st.corners[b]);
          const double len = linalg::dot(d, d);
          if (len > best) {
            best = len;
            ba = a;
            bb = b;
          }
        }
      }
      Point mid(st.corners[ba].size());
      for (std::size_t c = 0; c < mid.size(); ++c) mid[c] = 0.5 * (st.corners[ba][c] + st.corners[bb][c]);
      Stratum left = st;
      Stratum right = std::move(st);
      left.corners[bb] = mid;
      right.corners[ba] = mid;
      left.volume *= 0.5;
      right.volume *= 0.5;
      next.push_back(std::move(left));
      next.push_back(std::move(right));
    }
    strata = std::move(next);
  }
  return strata;
}

inline QuadratureResult integrate_mc(const VPolytope& base, int outputs, const Integrand& f,
                                     const QuadratureSpec& spec) {
  const auto strata = refine_strata(base.triangulation(), std::min<std::size_t>(spec.n_samples / 16 + 1, 4096));
  const std::size_t pieces = strata.size();
  const double total = base.volume();
  const int dim = base.affine_dim();
  struct Partial {
    std::vector<double> mean;
    linalg::Mat<double> cov;  // covariance of the stratum mean
    std::size_t count = 0;
  };
  std::vector<Partial> partial(pieces);
  const Rng root(spec.seed);
  parallel_for(pieces, [&](std::size_t j) {
    const std::size_t count = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(static_cast<double>(spec.n_samples) * strata[j].volume / total)));
    Rng rng = root.split(j);
    std::vector<double> sum(outputs, 0.0);
    linalg::Mat<double> cross(outputs, std::vector<double>(outputs, 0.0));
    std::vector<double> out(outputs);
    Point y(base.ambient_dim());
    const auto& corners = strata[j].corners;
    for (std::size_t s = 0; s < count; ++s) {
      const auto w = uniform_barycentric(rng, dim);
      std::fill(y.begin(), y.end(), 0.0);
      for (int v = 0; v <= dim; ++v) {
        const auto& p = corners[v];
        for (std::size_t c = 0; c < y.size(); ++c) y[c] += w[v] * p[c];
      }
      f(y, out.data());
      for (int a = 0; a < outputs; ++a) {
        sum[a] += out[a];
        for (int b = 0; b <= a; ++b) cross[a][b] += out[a] * out[b];
      }
    }
    Partial& part = partial[j];
    part.count = count;
    part.mean.resize(outputs);
    const double n = static_cast<double>(count);
    for (int a = 0; a < outputs; ++a) part.mean[a] = sum[a] / n;
    part.cov.assign(outputs, std::vector<double>(outputs, 0.0));
    for (int a = 0; a < outputs; ++a) {
      for (int b = 0; b <= a; ++b) {
        const double c = (cross[a][b] - n * part.mean[a] * part.mean[b]) / (n - 1.0);
        part.cov[a][b] = part.cov[b][a] = c / n;
      }
    }
  });
  QuadratureResult res;
  res.values.assign(outputs, 0.0);
  res.covariance.assign(outputs, std::vector<double>(outputs, 0.0));
  for (std::size_t j = 0; j < pieces; ++j) {
    const double v = strata[j].volume;
    for (int a = 0; a < outputs; ++a) {
      res.values[a] += v * partial[j].mean[a];
      for (int b = 0; b < outputs; ++b) res.covariance[a][b] += v * v * partial[j].cov[a][b];
    }
    res.evaluations += partial[j].count;
  }
  return res;
}

// 5-point Gauss-Legendre on [0, 1].
inline constexpr std::array<double, 5> kGaussNodes = {0.04691007703066800, 0.23076534494715845, 0.5,
                                                      0.76923465505284155, 0.95308992296933200};
inline constexpr std::array<double, 5> kGaussWeights = {0.11846344252809454, 0.23931433524968324,
                                                        0.28444444444444444, 0.23931433524968324,
                                                        0.11846344252809454};

// Degree-5 seven-point triangle rule (barycentric coordinates, weights sum to 1).
struct TriangleNode {
  double a, b, c, w;
};
inline constexpr std::array<TriangleNode, 7> kTriangleRule = {{
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
}};

struct GridPass {
  std::vector<double> values;
  std::size_t evaluations = 0;
};

inline GridPass grid_1d(const VPolytope& base, int outputs, const Integrand& f, int level,
                        const std::vector<double>& breakpoints) {
  double lo = base.vertices().front()[0];
  double hi = lo;
  for (const auto& v : base.vertices()) {
    lo = std::min(lo, v[0]);
    hi = std::max(hi, v[0]);
  }
  std::vector<double> cuts{lo, hi};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double a, double b) { return b - a <= 1e-12 * (hi - lo); }),
             cuts.end());
  std::vector<std::pair<double, double>> panels;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double h = (cuts[k + 1] - cuts[k]) / level;
    for (int p = 0; p < level; ++p) panels.emplace_back(cuts[k] + p * h, cuts[k] + (p + 1) * h);
  }
  std::vector<std::vector<double>> sums(panels.size(), std::vector<double>(outputs, 0.0));
  parallel_for(panels.size(), [&](std::size_t p) {
    std::vector<double> out(outputs);
    const auto [a, b] = panels[p];
    for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
      f(Point{a + (b - a) * kGaussNodes[g]}, out.data());
      for (int k = 0; k < outputs; ++k) sums[p][k] += (b - a) * kGaussWeights[g] * out[k];
    }
  });
  GridPass pass{std::vector<double>(outputs, 0.0), panels.size() * kGaussNodes.size()};
  for (const auto& s : sums) {
    for (int k = 0; k < outputs; ++k) pass.values[k] += s[k];
  }
  return pass;
}

inline GridPass grid_2d(const VPolytope& base, int outputs, const Integrand& f, int level) {
  const auto& tri = base.triangulation();
  std::vector<std::vector<double>> sums(tri.simplices.size(), std::vector<double>(outputs, 0.0));
  parallel_for(tri.simplices.size(), [&](std::size_t j) {
    const auto& p0 = tri.points[tri.simplices[j][0]];
    const auto& p1 = tri.points[tri.simplices[j][1]];
    const auto& p2 = tri.points[tri.simplices[j][2]];
    auto at = [&](double i, double k) {
      return Point{p0[0] + (i / level) * (p1[0] - p0[0]) + (k / level) * (p2[0] - p0[0]),
                   p0[1] + (i / level) * (p1[1] - p0[1]) + (k / level) * (p2[1] - p0[1])};
    };
    const double small_area = tri.volumes[j] / (static_cast<double>(level) * level);
    std::vector<double> out(outputs);
    auto rule = [&](const Point& a, const Point& b, const Point& c) {
      for (const auto& node : kTriangleRule) {
        const Point y{node.a * a[0] + node.b * b[0] + node.c * c[0], node.a * a[1] + node.b * b[1] + node.c * c[1]};
        f(y, out.data());
        for (int k = 0; k < outputs; ++k) sums[j][k] += small_area * node.w * out[k];
      }
    };
    for (int i = 0; i < level; ++i) {
      for (int k = 0; i + k < level; ++k) {
        rule(at(i, k), at(i + 1, k), at(i, k + 1));
        if (i + k + 2 <= level) rule(at(i + 1, k), at(i + 1, k + 1), at(i, k + 1));
      }
    }
  });
  GridPass pass{std::vector<double>(outputs, 0.0),
                tri.simplices.size() * static_cast<std::size_t>(level) * level * kTriangleRule.size()};
  for (const auto& s : sums) {
    for (int k = 0; k < outputs; ++k) pass.values[k] += s[k];
  }
  return pass;
}

}  // namespace detail

/// Integrates f over `base`. For the grid method the error proxy is the change
/// between `grid_level` and twice that resolution; in one dimension the panels
/// also split at `breakpoints`.
inline QuadratureResult integrate(const VPolytope& base, int outputs, const Integrand& f, const QuadratureSpec& spec,
                                  const std::vector<double>& breakpoints = {}) {
  if (!base.full_dimensional()) throw DegenerateError("integration domain is not full-dimensional");
  if (spec.method == QuadratureSpec::Method::mc) {
    if (spec.n_samples < 2 || spec.n_samples > kMaxQuadratureSamples) {
      throw CapacityError("Monte Carlo sample count outside [2, 5e7]");
    }
    return detail::integrate_mc(base, outputs, f, spec);
  }
  const int dim = base.ambient_dim();
  if (dim > 2) throw CapacityError("grid quadrature needs a base of dimension at most 2");
  if (spec.grid_level < 1 || spec.grid_level > 4096) throw CapacityError("grid level outside [1, 4096]");
  auto coarse = dim == 1 ? detail::grid_1d(base, outputs, f, spec.grid_level, breakpoints)
                         : detail::grid_2d(base, outputs, f, spec.grid_level);
  auto fine = dim == 1 ? detail::grid_1d(base, outputs, f, 2 * spec.grid_level, breakpoints)
                       : detail::grid_2d(base, outputs, f, 2 * spec.grid_level);
  QuadratureResult res;
  res.values = fine.values;
  res.covariance.assign(outputs, std::vector<double>(outputs, 0.0));
  for (int k = 0; k < outputs; ++k) {
    const double e = std::abs(fine.values[k] - coarse.values[k]);
    res.covariance[k][k] = e * e;
  }
  res.evaluations = coarse.evaluations + fine.evaluations;
  return res;
}

}  // namespace btiso
