#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "btiso/binomial.hpp"
#include "btiso/cover.hpp"
#include "btiso/error.hpp"
#include "btiso/exact.hpp"
#include "btiso/index_set.hpp"
#include "btiso/polytope.hpp"
#include "btiso/quadrature.hpp"

namespace btiso {

/// Lazily computed coordinate projections of one body, safe to share between threads.
class ProjectionTable {
 public:
  explicit ProjectionTable(VPolytope body) : body_(std::move(body)) {
    if (body_.ambient_dim() > kMaxGround) throw CapacityError("body dimension too large for index sets");
  }

  const VPolytope& body() const { return body_; }
  int n() const { return body_.ambient_dim(); }

  /// Projection onto H_coords, in the coordinates of `coords`. Requires coords nonempty.
  VPolytope projection(const IndexSet& coords) {
    if (coords.bits() == IndexSet::full_mask(n())) return body_;
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(coords.bits());
      if (it != cache_.end()) return it->second;
    }
    VPolytope p = project(body_, coords);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(coords.bits(), std::move(p)).first->second;
  }

  /// |coords|-dimensional volume of the projection; the empty projection has volume 1.
  double volume(const IndexSet& coords) {
    if (coords.empty()) return 1.0;
    return projection(coords).measure(coords.size());
  }

  /// Projection onto H_sigma^perp.
  double perp_volume(const IndexSet& sigma) { return volume(sigma.complement()); }

 private:
  VPolytope body_;
  std::mutex mu_;
  std::map<std::uint32_t, VPolytope> cache_;
};

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  double log_slack = 0.0;  // log rhs - log lhs
  bool holds = false;
  double tol = 0.0;
  std::string context;
  double std_error = 0.0;  // quadrature-based reports only
  std::vector<std::pair<std::string, double>> details;
};

inline constexpr double kDefaultCertificateTol = 1e-7;

inline InequalityReport make_report(std::string name, double log_lhs, double log_rhs, double tol, std::string context) {
  InequalityReport r;
  r.name = std::move(name);
  r.log_lhs = log_lhs;
  r.log_rhs = log_rhs;
  r.lhs = std::exp(log_lhs);
  r.rhs = std::exp(log_rhs);
  r.log_slack = log_rhs - log_lhs;
  r.tol = tol;
  r.holds = r.log_slack >= -tol;
  r.context = std::move(context);
  return r;
}

namespace detail {

inline double checked_log(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DegenerateError(what + " has zero or invalid volume");
  return std::log(v);
}

inline std::string cover_context(const IndexSet& sigma, const Cover& c) {
  return "sigma=" + sigma.to_string() + " cover=" + c.to_string();
}

inline void require_cover_of(const Cover& c, const IndexSet& sigma) {
  if (!(c.sigma == sigma)) throw InputError("cover is not a cover of sigma=" + sigma.to_string());
  validate_cover(sigma, c.parts);
}

inline void require_proper(const IndexSet& sigma, int n) {
  if (sigma.empty() || sigma.size() >= n) throw InputError("sigma must be a nonempty proper subset of [n]");
  if (sigma.ground_n() > n || (sigma.bits() & ~IndexSet::full_mask(n)) != 0) throw InputError("sigma exceeds [n]");
}

inline IndexSet on_ground(const IndexSet& s, int n) { return IndexSet(s.bits(), n); }

}  // namespace detail

/// vol(K)^s <= prod vol(P_{H_{sigma_i}} K) for an s-cover of [n].
inline InequalityReport check_bt(ProjectionTable& table, const Cover& c, double tol = kDefaultCertificateTol) {
  const int n = table.n();
  const IndexSet full = IndexSet::full(n);
  if (c.sigma.bits() != full.bits()) throw InputError("Bollobas-Thomason check needs a cover of [n]");
  validate_cover(c.sigma, c.parts);
  const double log_lhs = c.s * detail::checked_log(table.body().measure(n), "body");
  double log_rhs = 0.0;
  for (const auto& p : c.parts) log_rhs += detail::checked_log(table.volume(detail::on_ground(p, n)), "projection");
  return make_report("bt", log_lhs, log_rhs, tol, "cover=" + c.to_string());
}

inline InequalityReport check_bt(const VPolytope& k, const Cover& c, double tol = kDefaultCertificateTol) {
  ProjectionTable t(k);
  return check_bt(t, c, tol);
}

/// Local inequality:
///   vol(K)^{m-s} vol(P_{sigma^perp}K)^s
///     <= [prod C(n-|sigma_i|, n-|sigma|) / C(n, n-|sigma|)^{m-s}] prod vol(P_{sigma_i^perp}K).
inline InequalityReport check_local_bt(ProjectionTable& table, const IndexSet& sigma_in, const Cover& c,
                                       double tol = kDefaultCertificateTol) {
  const int n = table.n();
  const IndexSet sigma = detail::on_ground(sigma_in, n);
  detail::require_proper(sigma, n);
  detail::require_cover_of(c, sigma_in);
  const int m = c.m();
  const int s = c.s;
  const int codim = n - sigma.size();
  const double log_k = detail::checked_log(table.body().measure(n), "body");
  const double log_v = detail::checked_log(table.perp_volume(sigma), "projection onto sigma-perp");
  const double log_lhs = (m - s) * log_k + s * log_v;
  double log_rhs = -(m - s) * log_binomial(n, codim);
  for (const auto& p : c.parts) {
    const IndexSet part = detail::on_ground(p, n);
    log_rhs += log_binomial(n - part.size(), codim);
    log_rhs += detail::checked_log(table.volume(part.complement()), "projection onto a part complement");
  }
  auto r = make_report("local-bt", log_lhs, log_rhs, tol, detail::cover_context(sigma, c));
  r.details = {{"m", m}, {"s", s}, {"vol_K", std::exp(log_k)}, {"vol_perp", std::exp(log_v)}};
  return r;
}

inline InequalityReport check_local_bt(const VPolytope& k, const IndexSet& sigma, const Cover& c,
                                       double tol = kDefaultCertificateTol) {
  ProjectionTable t(k);
  return check_local_bt(t, sigma, c, tol);
}

struct ExactLocalBt {
  Rational lhs;
  Rational rhs;
};

/// Both sides of the local inequality in exact arithmetic for rational vertices.
inline ExactLocalBt check_local_bt_exact(const std::vector<std::vector<Rational>>& vertices, const IndexSet& sigma_in,
                                         const Cover& c) {
  if (vertices.empty()) throw InputError("no vertices");
  const int n = static_cast<int>(vertices[0].size());
  const IndexSet sigma = detail::on_ground(sigma_in, n);
  detail::require_proper(sigma, n);
  detail::require_cover_of(c, sigma_in);
  auto proj_volume = [&](const IndexSet& coords) {
    std::vector<std::vector<Rational>> pts;
    for (const auto& v : vertices) {
      std::vector<Rational> q;
      for (int e : coords.elements()) q.push_back(v[e - 1]);
      pts.push_back(std::move(q));
    }
    return exact_hull_volume(pts);
  };
  auto power = [](const Rational& x, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  };
  const int m = c.m();
  const int s = c.s;
  const int codim = n - sigma.size();
  ExactLocalBt out;
  out.lhs = power(exact_hull_volume(vertices), m - s) * power(proj_volume(sigma.complement()), s);
  Rational constant(1);
  for (const auto& p : c.parts) constant *= Rational(binomial(n - p.size(), codim));
  constant /= power(Rational(binomial(n, codim)), m - s);
  out.rhs = constant;
  for (const auto& p : c.parts) out.rhs *= proj_volume(detail::on_ground(p, n).complement());
  return out;
}

/// Ratio form obtained by dividing the local inequality by vol(P_{sigma^perp}K)^m.
inline InequalityReport check_theorem1_derived(ProjectionTable& table, const IndexSet& sigma_in, const Cover& c,
                                               double tol = kDefaultCertificateTol) {
  const int n = table.n();
  const IndexSet sigma = detail::on_ground(sigma_in, n);
  detail::require_proper(sigma, n);
  detail::require_cover_of(c, sigma_in);
  const int codim = n - sigma.size();
  const double log_v = detail::checked_log(table.perp_volume(sigma), "projection onto sigma-perp");
  const double log_lhs =
      (c.m() - c.s) * (log_binomial(n, codim) + detail::checked_log(table.body().measure(n), "body") - log_v);
  double log_rhs = 0.0;
  for (const auto& p : c.parts) {
    const IndexSet part = detail::on_ground(p, n);
    log_rhs += log_binomial(n - part.size(), codim) +
               detail::checked_log(table.volume(part.complement()), "projection onto a part complement") - log_v;
  }
  return make_report("derived", log_lhs, log_rhs, tol, detail::cover_context(sigma, c));
}

/// Chain inequality for tau inside sigma, using the cover (tau \ {j} : j in tau).
inline InequalityReport check_tau_chain(ProjectionTable& table, const IndexSet& sigma_in, const IndexSet& tau_in,
                                        double tol = kDefaultCertificateTol) {
  const int n = table.n();
  const IndexSet sigma = detail::on_ground(sigma_in, n);
  const IndexSet tau = detail::on_ground(tau_in, n);
  detail::require_proper(sigma, n);
  if (!tau.is_subset_of(sigma)) throw InputError("tau must be a subset of sigma");
  const std::string context = "sigma=" + sigma.to_string() + " tau=" + tau.to_string();
  if (tau.empty()) return make_report("tau-chain", 0.0, 0.0, tol, context);
  const int codim = n - sigma.size();
  const IndexSet perp = sigma.complement();
  const double log_v = detail::checked_log(table.volume(perp), "projection onto sigma-perp");
  const double log_lhs = log_binomial(codim + tau.size(), codim) +
                         detail::checked_log(table.volume(perp | tau), "projection") - log_v;
  double log_rhs = 0.0;
  for (int j : tau.elements()) {
    log_rhs += log_binomial(codim + 1, codim) +
               detail::checked_log(table.volume(perp | IndexSet::of({j}, n)), "projection") - log_v;
  }
  return make_report("tau-chain", log_lhs, log_rhs, tol, context);
}

/// Berwald comparison with closed-form integrals of f^g1 and f^g2 over a base of
/// dimension `dim` and volume `base_volume`.
inline InequalityReport berwald_from_integrals(double base_volume, int dim, double g1, double g2, double integral_g1,
                                               double integral_g2, double tol = 1e-10) {
  if (!(g1 > 0.0 && g2 > g1)) throw InputError("Berwald exponents need 0 < g1 < g2");
  const double log_vol = detail::checked_log(base_volume, "Berwald base");
  const double log_lhs =
      (log_generalized_binomial(g2, dim) - log_vol + detail::checked_log(integral_g2, "integral of f^g2")) / g2;
  const double log_rhs =
      (log_generalized_binomial(g1, dim) - log_vol + detail::checked_log(integral_g1, "integral of f^g1")) / g1;
  auto r = make_report("berwald", log_lhs, log_rhs, tol, "g1=" + std::to_string(g1) + " g2=" + std::to_string(g2));
  r.details = {{"integral_g1", integral_g1}, {"integral_g2", integral_g2}};
  return r;
}

/// Berwald comparison for a function sampled through quadrature over `base`.
inline InequalityReport berwald_check(const VPolytope& base, const std::function<double(const Point&)>& f, double g1,
                                      double g2, const QuadratureSpec& spec, double se_factor = 4.0) {
  auto integrand = [&](const Point& y, double* out) {
    const double v = f(y);
    if (v < 0.0) throw InputError("Berwald check: function is negative at a node");
    out[0] = std::pow(v, g1);
    out[1] = std::pow(v, g2);
  };
  const auto q = integrate(base, 2, integrand, spec);
  auto r = berwald_from_integrals(base.volume(), base.affine_dim(), g1, g2, q.values[0], q.values[1]);
  // delta method on log rhs - log lhs = log(I1)/g1 - log(I2)/g2
  const double w1 = 1.0 / (g1 * q.values[0]);
  const double w2 = -1.0 / (g2 * q.values[1]);
  const double var = w1 * w1 * q.covariance[0][0] + 2 * w1 * w2 * q.covariance[0][1] + w2 * w2 * q.covariance[1][1];
  r.std_error = std::sqrt(std::max(0.0, var));
  r.tol = se_factor * r.std_error + 1e-10;
  r.holds = r.log_slack >= -r.tol;
  return r;
}

struct AppendixAudit {
  std::vector<InequalityReport> steps;  // Bollobas-Thomason on slices, Holder, Berwald
  std::vector<InequalityReport> berwald_parts;
  InequalityReport total;              // the local inequality itself
  double chain_log_slack = 0.0;        // (m - s) * sum of step slacks
  double chain_std_error = 0.0;
  bool chain_consistent = true;
  bool trivial = false;                // every part equals sigma
  std::size_t evaluations = 0;
};

namespace detail {

/// d-volume of the hull of `pts` (d = point dimension); cheap paths for d <= 2.
inline double hull_measure(std::vector<Point> pts, int d) {
  if (pts.empty()) return 0.0;
  if (d == 1) {
    const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end());
    return (*hi)[0] - (*lo)[0];
  }
  if (d == 2) {
    std::sort(pts.begin(), pts.end());
    auto cross = [](const Point& o, const Point& a, const Point& b) {
      return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Point> chain(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && cross(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
      chain[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
      while (k >= lower && cross(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
      chain[k++] = pts[i];
    }
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) area += chain[i][0] * chain[i + 1][1] - chain[i + 1][0] * chain[i][1];
    return std::abs(area) / 2.0;
  }
  return VPolytope(std::move(pts)).measure(d);
}

}  // namespace detail

/// Numerical audit of the three-step proof of the local inequality for every
/// cover in `covers`: each step is evaluated with quadrature over
/// P_{sigma^perp}K and judged at `se_factor` standard errors. All covers share
/// one set of quadrature nodes, so each slice is computed once.
inline std::vector<AppendixAudit> audit_appendix(ProjectionTable& table, const IndexSet& sigma_in,
                                                 const std::vector<Cover>& covers, const QuadratureSpec& spec,
                                                 double se_factor = 4.0) {
  const int n = table.n();
  const IndexSet sigma = detail::on_ground(sigma_in, n);
  detail::require_proper(sigma, n);
  for (const auto& c : covers) detail::require_cover_of(c, sigma_in);
  const int k = sigma.size();
  const int codim = n - k;
  const IndexSet perp = sigma.complement();
  const auto perp_elems = perp.elements();

  // Per-cover layout: outputs [offset, offset + 2 + 2p) hold slice volume,
  // product integrand, J_i (p) and G_i (p).
  struct Layout {
    std::vector<IndexSet> parts;  // nontrivial parts only
    std::vector<int> proj;        // index into `keeps` per part
    int offset = 0;
  };
  std::vector<Layout> layouts(covers.size());
  std::vector<std::vector<int>> keeps;  // positions (inside sigma) of each sigma \ sigma_i
  int outputs = 0;
  for (std::size_t ci = 0; ci < covers.size(); ++ci) {
    auto& lay = layouts[ci];
    const auto& c = covers[ci];
    for (const auto& part : c.parts) {
      if (!(detail::on_ground(part, n) == sigma)) lay.parts.push_back(detail::on_ground(part, n));
    }
    if (c.m() == c.s || lay.parts.empty()) continue;
    for (const auto& part : lay.parts) {
      std::vector<int> keep;
      for (int e : (sigma - part).elements()) keep.push_back(sigma.rank_of(e));
      auto it = std::find(keeps.begin(), keeps.end(), keep);
      lay.proj.push_back(static_cast<int>(it - keeps.begin()));
      if (it == keeps.end()) keeps.push_back(std::move(keep));
    }
    lay.offset = outputs;
    outputs += 2 + 2 * static_cast<int>(lay.parts.size());
  }

  std::vector<AppendixAudit> audits(covers.size());
  for (std::size_t ci = 0; ci < covers.size(); ++ci) audits[ci].total = check_local_bt(table, sigma, covers[ci]);
  if (outputs == 0) {
    for (std::size_t ci = 0; ci < covers.size(); ++ci) {
      audits[ci].trivial = true;
      const auto context = detail::cover_context(sigma, covers[ci]);
      for (const char* name : {"appendix-step1", "appendix-step2", "appendix-step3"}) {
        audits[ci].steps.push_back(make_report(name, 0.0, 0.0, 0.0, context));
      }
    }
    return audits;
  }

  const VPolytope base = table.projection(perp);
  const double v = base.volume();
  const VPolytope& body = table.body();
  auto integrand = [&](const Point& y, double* out) {
    Point x(n, 0.0);
    for (std::size_t r = 0; r < perp_elems.size(); ++r) x[perp_elems[r] - 1] = y[r];
    std::fill(out, out + outputs, 0.0);
    const auto sl = slice(body, x, sigma);
    if (!sl) return;
    const double slice_volume = sl->measure(k);
    std::vector<double> proj_volume(keeps.size());
    for (std::size_t j = 0; j < keeps.size(); ++j) {
      std::vector<Point> pts;
      pts.reserve(sl->vertices().size());
      for (const auto& w : sl->vertices()) {
        Point q;
        for (int c : keeps[j]) q.push_back(w[c]);
        pts.push_back(std::move(q));
      }
      proj_volume[j] = detail::hull_measure(std::move(pts), static_cast<int>(keeps[j].size()));
    }
    for (std::size_t ci = 0; ci < covers.size(); ++ci) {
      const auto& lay = layouts[ci];
      if (lay.proj.empty()) continue;
      double* o = out + lay.offset;
      const int p = static_cast<int>(lay.parts.size());
      const double ms = covers[ci].m() - covers[ci].s;
      o[0] = slice_volume;
      double log_prod = 0.0;
      bool zero = false;
      for (int i = 0; i < p; ++i) {
        const double vi = proj_volume[lay.proj[i]];
        const int dim_i = static_cast<int>(keeps[lay.proj[i]].size());
        o[2 + i] = std::pow(vi, static_cast<double>(k) / dim_i);
        o[2 + p + i] = vi;
        if (vi > 0.0) {
          log_prod += std::log(vi) / ms;
        } else {
          zero = true;
        }
      }
      o[1] = zero ? 0.0 : std::exp(log_prod);
    }
  };
  std::vector<double> breakpoints;
  if (perp_elems.size() == 1) {
    for (const auto& vert : body.vertices()) breakpoints.push_back(vert[perp_elems[0] - 1]);
  }
  const auto q = integrate(base, outputs, integrand, spec, breakpoints);
  const double vol_k = body.measure(n);
  const double log_c0 = log_binomial(n, codim);

  for (std::size_t ci = 0; ci < covers.size(); ++ci) {
    auto& audit = audits[ci];
    const auto& lay = layouts[ci];
    const std::string context = detail::cover_context(sigma, covers[ci]);
    if (lay.proj.empty()) {
      audit.trivial = true;
      for (const char* name : {"appendix-step1", "appendix-step2", "appendix-step3"}) {
        audit.steps.push_back(make_report(name, 0.0, 0.0, 0.0, context));
      }
      continue;
    }
    audit.evaluations = q.evaluations;
    const int p = static_cast<int>(lay.parts.size());
    const double ms = covers[ci].m() - covers[ci].s;
    const int width = 2 + 2 * p;
    auto val = [&](int a) { return q.values[lay.offset + a]; };
    for (int a = 0; a < width; ++a) {
      if (!(val(a) > 0.0)) throw DegenerateError("appendix audit: an integral vanished");
    }
    // Each slack is a linear combination of log integrals plus constants.
    auto se_of = [&](const std::vector<double>& w) {
      double var = 0.0;
      for (int a = 0; a < width; ++a) {
        for (int b = 0; b < width; ++b) {
          var += w[a] * w[b] * q.covariance[lay.offset + a][lay.offset + b] / (val(a) * val(b));
        }
      }
      return std::sqrt(std::max(0.0, var));
    };
    auto judged = [&](InequalityReport r, const std::vector<double>& w) {
      r.std_error = se_of(w);
      r.tol = se_factor * r.std_error + 1e-9;
      r.holds = r.log_slack >= -r.tol;
      return r;
    };
    std::vector<int> keep_dim(p);
    for (int i = 0; i < p; ++i) keep_dim[i] = static_cast<int>(keeps[lay.proj[i]].size());
    const double log_slice = std::log(val(0));
    const double log_i1 = std::log(val(1));
    std::vector<double> exps(p);
    double log_holder = 0.0;
    for (int i = 0; i < p; ++i) {
      exps[i] = (static_cast<double>(keep_dim[i]) / ms) / k;
      log_holder += exps[i] * std::log(val(2 + i));
    }
    double log_berwald = std::log(v) - log_c0;
    for (int i = 0; i < p; ++i) {
      const double log_ci = log_binomial(n - lay.parts[i].size(), codim);
      log_berwald += (log_ci + std::log(val(2 + p + i)) - std::log(v)) / ms;
    }

    std::vector<double> w1(width, 0.0), w2(width, 0.0), w3(width, 0.0), wsum(width, 0.0);
    w1[1] = 1.0;
    w1[0] = -1.0;
    w2[1] = -1.0;
    for (int i = 0; i < p; ++i) {
      w2[2 + i] = exps[i];
      w3[2 + i] = -exps[i];
      w3[2 + p + i] = 1.0 / ms;
    }
    for (int a = 0; a < width; ++a) wsum[a] = w1[a] + w2[a] + w3[a];

    auto step1 = judged(make_report("appendix-step1", log_slice, log_i1, 0.0, context), w1);
    step1.details = {{"vol_K_exact", vol_k}, {"fubini_rel_error", val(0) / vol_k - 1.0}};
    audit.steps.push_back(step1);
    audit.steps.push_back(judged(make_report("appendix-step2", log_i1, log_holder, 0.0, context), w2));
    audit.steps.push_back(judged(make_report("appendix-step3", log_holder, log_berwald, 0.0, context), w3));

    // Per-part Berwald comparisons with gamma2 = |sigma|, gamma1 = |sigma \ sigma_i|.
    for (int i = 0; i < p; ++i) {
      const double log_ci = log_binomial(n - lay.parts[i].size(), codim);
      const double lhs = (log_c0 - std::log(v) + std::log(val(2 + i))) / k;
      const double rhs = (log_ci - std::log(v) + std::log(val(2 + p + i))) / keep_dim[i];
      std::vector<double> w(width, 0.0);
      w[2 + i] = -1.0 / k;
      w[2 + p + i] = 1.0 / keep_dim[i];
      auto r = judged(make_report("berwald-part", lhs, rhs, 0.0, context + " part=" + lay.parts[i].to_string()), w);
      const double exact_g = table.volume(lay.parts[i].complement());
      r.details = {{"integral_vol_i", val(2 + p + i)}, {"exact_projection_volume", exact_g}};
      audit.berwald_parts.push_back(r);
    }

    double sum = 0.0;
    for (const auto& st : audit.steps) sum += st.log_slack;
    audit.chain_log_slack = ms * sum;
    audit.chain_std_error = ms * se_of(wsum);
    audit.chain_consistent =
        std::abs(audit.chain_log_slack - audit.total.log_slack) <= 5.0 * audit.chain_std_error + 1e-9;
  }
  return audits;
}

/// Single-cover form of the audit above.
inline AppendixAudit audit_appendix(ProjectionTable& table, const IndexSet& sigma_in, const Cover& c,
                                    const QuadratureSpec& spec, double se_factor = 4.0) {
  return audit_appendix(table, sigma_in, std::vector<Cover>{c}, spec, se_factor).front();
}

}  // namespace btiso
