#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btiso/binomial.hpp"
#include "btiso/cover.hpp"
#include "btiso/error.hpp"
#include "btiso/inequality.hpp"
#include "btiso/linear_program.hpp"
#include "btiso/polytope.hpp"
#include "btiso/rng.hpp"

namespace btiso {

/// x_sigma and the caps d_tau for every tau inside sigma (d of the empty set is 1).
struct ProjectionRatios {
  IndexSet sigma;
  int n = 0;
  double x_sigma = 0.0;
  double body_volume = 0.0;
  double perp_volume = 0.0;
  std::map<std::uint32_t, double> d;

  double d_of(const IndexSet& tau) const { return d.at(tau.bits()); }
};

inline ProjectionRatios projection_ratios(ProjectionTable& table, const IndexSet& sigma_in) {
  const int n = table.n();
  const IndexSet sigma(sigma_in.bits(), n);
  detail::require_proper(sigma, n);
  ProjectionRatios r;
  r.sigma = sigma;
  r.n = n;
  const int codim = n - sigma.size();
  const IndexSet perp = sigma.complement();
  r.body_volume = table.body().measure(n);
  r.perp_volume = table.volume(perp);
  if (!(r.body_volume > 0.0)) throw DegenerateError("body is not full-dimensional");
  if (!(r.perp_volume > 0.0)) throw VerificationError("projection onto sigma-perp has zero volume");
  r.x_sigma = static_cast<double>(binomial(n, codim)) * r.body_volume / r.perp_volume;
  for (const auto& tau : subsets_canonical(sigma)) {
    if (tau.empty()) {
      r.d[0] = 1.0;
      continue;
    }
    const double vol = tau == sigma ? r.body_volume : table.volume(perp | tau);
    r.d[tau.bits()] = static_cast<double>(binomial(codim + tau.size(), codim)) * vol / r.perp_volume;
  }
  return r;
}

/// Log-space constraint system over u_tau = log x_tau for nonempty tau inside sigma.
struct HannerProgram {
  LinearProgram lp;
  std::vector<IndexSet> vars;          // canonical order: (|tau|, bitmask)
  std::vector<std::string> le_labels;  // one per le row
  std::vector<std::string> eq_labels;

  int index_of(const IndexSet& tau) const {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == tau) return static_cast<int>(i);
    }
    return -1;
  }
};

inline HannerProgram build_constraints(const ProjectionRatios& r, const std::vector<Cover>& covers) {
  HannerProgram hp;
  hp.vars = subsets_canonical(r.sigma, false);
  const int nv = static_cast<int>(hp.vars.size());
  hp.lp = LinearProgram(nv);
  auto unit = [&](int i) {
    std::vector<double> row(nv, 0.0);
    row[i] = 1.0;
    return row;
  };
  const int sig = hp.index_of(r.sigma);
  hp.lp.add_eq(unit(sig), std::log(r.x_sigma));
  hp.eq_labels.push_back("pin:" + r.sigma.to_string());
  for (int i = 0; i < nv; ++i) {
    if (i == sig) continue;
    hp.lp.add_le(unit(i), std::log(r.d_of(hp.vars[i])));
    hp.le_labels.push_back("cap:" + hp.vars[i].to_string());
  }
  for (const auto& c : covers) {
    std::vector<double> row(nv, 0.0);
    row[sig] += c.m() - c.s;
    for (const auto& p : c.parts) {
      const IndexSet comp = IndexSet(r.sigma.bits(), r.n) - IndexSet(p.bits(), r.n);
      if (!comp.empty()) row[hp.index_of(comp)] -= 1.0;
    }
    if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) continue;
    hp.lp.add_le(std::move(row), 0.0);
    hp.le_labels.push_back("type1:" + c.to_string());
  }
  for (int i = 0; i < nv; ++i) {
    if (hp.vars[i].size() < 2) continue;
    std::vector<double> row = unit(i);
    for (int e : hp.vars[i].elements()) row[hp.index_of(IndexSet::of({e}, r.n))] -= 1.0;
    hp.lp.add_le(std::move(row), 0.0);
    hp.le_labels.push_back("type2:" + hp.vars[i].to_string());
  }
  return hp;
}

struct MinimalTuple {
  IndexSet sigma;
  ProjectionRatios ratios;
  std::map<std::uint32_t, double> t;  // includes the empty set with value 1
  std::vector<IndexSet> order;
  std::vector<std::string> active;      // labels of tight rows at the final vertex
  double lower_bound = 0.0;             // C(K)
  double upper_bound = 0.0;             // D(K)
  bool bounds_ok = false;
  double product_residual = 0.0;        // max relative deviation of t_tau from prod t_i
  bool minimal = false;                 // every coordinate failed the decrease probe
  bool cap_bound = false;               // cover enumeration was cut by its caps
  int covers_used = 0;
  int escalations = 0;
  bool verified = false;
  std::string diagnostic;

  double t_of(const IndexSet& tau) const { return t.at(tau.bits()); }
};

struct TupleOptions {
  int max_m = 0;
  int max_mult = 0;
  double product_tol = 1e-8;
  double probe = 1e-6;
};

namespace detail {

inline MinimalTuple solve_tuple(const ProjectionRatios& ratios, const CoverEnumeration& covers,
                                const TupleOptions& opt) {
  MinimalTuple mt;
  mt.sigma = ratios.sigma;
  mt.ratios = ratios;
  mt.cap_bound = covers.cap_bound;
  mt.covers_used = static_cast<int>(covers.covers.size());
  const auto hp = build_constraints(ratios, covers.covers);
  std::vector<int> order(hp.vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  mt.order = hp.vars;
  const auto sol = sequential_min(hp.lp, order);
  const auto& u = sol.values;
  mt.t[0] = 1.0;
  for (std::size_t i = 0; i < hp.vars.size(); ++i) mt.t[hp.vars[i].bits()] = std::exp(u[i]);
  for (int r : sol.active_rows) {
    const int le = static_cast<int>(hp.le_labels.size());
    const int e = r - le;
    if (r < le) {
      mt.active.push_back(hp.le_labels[r]);
    } else if (e < static_cast<int>(hp.eq_labels.size())) {
      mt.active.push_back(hp.eq_labels[e]);
    } else {
      mt.active.push_back("fixed:" + hp.vars[order[e - hp.eq_labels.size()]].to_string());
    }
  }

  // Bounds C(K) <= t_tau <= D(K).
  double upper = 0.0;
  for (const auto& [bits, d] : ratios.d) upper = std::max(upper, d);
  double lower = std::numeric_limits<double>::infinity();
  for (const auto& tau : hp.vars) {
    double c = std::pow(ratios.x_sigma, tau.size());
    for (int i : tau.elements()) c /= ratios.d_of(ratios.sigma - IndexSet::of({i}, ratios.n));
    lower = std::min(lower, c);
  }
  mt.lower_bound = lower;
  mt.upper_bound = upper;
  mt.bounds_ok = true;
  for (const auto& tau : hp.vars) {
    const double v = mt.t_of(tau);
    mt.bounds_ok = mt.bounds_ok && v >= lower * (1 - 1e-9) && v <= upper * (1 + 1e-9);
  }

  // Product identity t_tau = prod_{i in tau} t_i.
  double worst = 0.0;
  for (const auto& tau : hp.vars) {
    double prod = 1.0;
    for (int i : tau.elements()) prod *= mt.t_of(IndexSet::of({i}, ratios.n));
    worst = std::max(worst, std::abs(mt.t_of(tau) / prod - 1.0));
  }
  mt.product_residual = worst;

  // Minimality probe: lowering any single coordinate by the factor (1 - probe) must break feasibility.
  mt.minimal = true;
  const double step = -std::log1p(-opt.probe);
  for (std::size_t i = 0; i < hp.vars.size(); ++i) {
    if (can_decrease(hp.lp, u, static_cast<int>(i), step, 1e-9)) mt.minimal = false;
  }
  mt.verified = worst <= opt.product_tol && mt.bounds_ok && mt.minimal;
  if (!mt.verified) {
    mt.diagnostic = "product residual " + std::to_string(worst) + (mt.bounds_ok ? "" : ", bounds violated") +
                    (mt.minimal ? "" : ", not minimal") + (mt.cap_bound ? ", cover caps bound" : "");
  }
  return mt;
}

}  // namespace detail

/// Componentwise-minimal solution of the constraint system, found by minimizing
/// the coordinates in canonical order. When the product identity fails and the
/// cover enumeration was capped, the caps are doubled once before giving up.
inline MinimalTuple minimal_tuple(ProjectionTable& table, const IndexSet& sigma, const TupleOptions& opt = {},
                                  CoverCatalog* catalog = nullptr) {
  const auto ratios = projection_ratios(table, sigma);
  CoverEnumeration covers;
  if (catalog != nullptr) {
    covers = catalog->irreducible(ratios.sigma);
  } else {
    covers = enumerate_irreducible_covers(ratios.sigma, opt.max_m, opt.max_mult);
  }
  auto mt = detail::solve_tuple(ratios, covers, opt);
  if (!mt.verified && mt.cap_bound) {
    const int k = ratios.sigma.size();
    const int m2 = 2 * (opt.max_m > 0 ? opt.max_m : 1 << k);
    const int mult2 = 2 * (opt.max_mult > 0 ? opt.max_mult : k);
    auto wider = enumerate_irreducible_covers(ratios.sigma, m2, mult2);
    mt = detail::solve_tuple(ratios, wider, opt);
    mt.escalations = 1;
  }
  return mt;
}

/// Check of one certified conclusion.
struct Certificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct HannerWitness {
  IndexSet sigma;
  int n = 0;
  std::map<int, double> c;  // half side lengths on sigma
  enum class LMode { box, explicit_body };
  LMode l_mode = LMode::box;
  std::vector<double> b;    // box half sides, ascending over [n] \ sigma
  VPolytope l_body;         // explicit mode: body in sigma-perp coordinates
  std::map<std::uint32_t, double> t;
  std::vector<IndexSet> lp_order;
  Certificate vol_equal;
  std::vector<Certificate> projection_dominance;  // one per tau inside sigma
  Certificate l_volume;
  std::vector<Certificate> closed_vs_hull;        // one per tau inside sigma
  bool all_pass = false;

  VPolytope l_polytope() const {
    if (l_mode == LMode::explicit_body) return l_body;
    std::vector<double> lo, hi;
    for (double bi : b) {
      lo.push_back(-bi);
      hi.push_back(bi);
    }
    return make_box(lo, hi);
  }
};

/// Volume of P_{sigma^perp + tau} B_K = (prod_{i in tau} t_i) vol(L) / C(codim + |tau|, codim).
inline double hanner_closed_form(const std::map<int, double>& c, double l_volume, const IndexSet& tau, int codim) {
  double prod = 1.0;
  for (int i : tau.elements()) prod *= 2.0 * c.at(i);
  return prod * l_volume / static_cast<double>(binomial(codim + tau.size(), codim));
}

namespace detail {

/// conv(sum_{i in tau} c_i [-e_i, e_i] and L) inside the coordinates tau ∪ sigma-perp (ascending).
inline VPolytope hanner_projection(const HannerWitness& w, const VPolytope& l, const IndexSet& tau) {
  const IndexSet perp = IndexSet(w.sigma.bits(), w.n).complement();
  const IndexSet coords = perp | tau;
  const auto all = coords.elements();
  const int dim = static_cast<int>(all.size());
  std::vector<Point> pts;
  const auto tau_elems = tau.elements();
  for (std::uint32_t mask = 0; mask < (1u << tau_elems.size()); ++mask) {
    Point x(dim, 0.0);
    for (std::size_t j = 0; j < tau_elems.size(); ++j) {
      const double half = w.c.at(tau_elems[j]);
      x[coords.rank_of(tau_elems[j])] = (mask >> j) & 1u ? half : -half;
    }
    pts.push_back(std::move(x));
  }
  const auto perp_elems = perp.elements();
  for (const auto& v : l.vertices()) {
    Point x(dim, 0.0);
    for (std::size_t j = 0; j < perp_elems.size(); ++j) x[coords.rank_of(perp_elems[j])] = v[j];
    pts.push_back(std::move(x));
  }
  return VPolytope(std::move(pts));
}

inline void certify(HannerWitness& w, ProjectionTable& table) {
  const int n = w.n;
  const IndexSet sigma(w.sigma.bits(), n);
  const IndexSet perp = sigma.complement();
  const int codim = n - sigma.size();
  const VPolytope l = w.l_polytope();
  if (l.ambient_dim() != codim) throw InputError("L must live in the sigma-perp coordinates");
  const double perp_volume = table.volume(perp);
  const double l_volume = l.measure(codim);
  const double k_volume = table.body().measure(n);
  w.l_volume = {"L_volume", l_volume, perp_volume, std::abs(l_volume / perp_volume - 1.0), 1e-9, false};
  w.l_volume.pass = w.l_volume.residual <= w.l_volume.tol;

  const double closed_full = hanner_closed_form(w.c, l_volume, sigma, codim);
  w.vol_equal = {"vol_equal", closed_full, k_volume, std::abs(closed_full / k_volume - 1.0), 1e-7, false};
  w.vol_equal.pass = w.vol_equal.residual <= w.vol_equal.tol;

  w.projection_dominance.clear();
  w.closed_vs_hull.clear();
  bool ok = w.l_volume.pass && w.vol_equal.pass;
  for (const auto& tau : subsets_canonical(sigma)) {
    const double closed = hanner_closed_form(w.c, l_volume, tau, codim);
    const double of_k = tau == sigma ? k_volume : table.volume(perp | tau);
    const double scale = std::max(1.0, of_k);
    Certificate dom{"projection_dominance:" + tau.to_string(), of_k, closed, std::max(0.0, closed - of_k),
                    1e-9 * scale, false};
    dom.pass = of_k >= closed - dom.tol;
    const double hull = hanner_projection(w, l, tau).measure(codim + tau.size());
    Certificate cross{"closed_vs_hull:" + tau.to_string(), closed, hull, std::abs(closed / hull - 1.0), 1e-8, false};
    cross.pass = cross.residual <= cross.tol;
    ok = ok && dom.pass && cross.pass;
    w.projection_dominance.push_back(dom);
    w.closed_vs_hull.push_back(cross);
  }
  w.all_pass = ok;
}

}  // namespace detail

struct LSpec {
  HannerWitness::LMode mode = HannerWitness::LMode::box;
  VPolytope body;  // explicit mode only, in sigma-perp coordinates
};

/// B_K = conv(sum_{i in sigma} (t_i / 2) [-e_i, e_i], L) with all certificates evaluated.
inline HannerWitness build_hanner(ProjectionTable& table, const MinimalTuple& mt, const LSpec& l_spec = {}) {
  if (!mt.verified) throw VerificationError("minimal tuple failed verification: " + mt.diagnostic);
  const int n = table.n();
  HannerWitness w;
  w.sigma = IndexSet(mt.sigma.bits(), n);
  w.n = n;
  w.t = mt.t;
  w.lp_order = mt.order;
  for (int i : w.sigma.elements()) w.c[i] = mt.t_of(IndexSet::of({i}, n)) / 2.0;
  const int codim = n - w.sigma.size();
  const double perp_volume = mt.ratios.perp_volume;
  w.l_mode = l_spec.mode;
  if (l_spec.mode == HannerWitness::LMode::box) {
    const double side = std::pow(perp_volume / std::pow(2.0, codim), 1.0 / codim);
    w.b.assign(codim, side);
  } else {
    if (!l_spec.body.valid() || l_spec.body.ambient_dim() != codim) {
      throw InputError("explicit L must be a body in the " + std::to_string(codim) + " sigma-perp coordinates");
    }
    if (std::abs(l_spec.body.measure(codim) / perp_volume - 1.0) > 1e-9) {
      throw InputError("explicit L must have the volume of the projection onto sigma-perp");
    }
    if (!l_spec.body.contains(Point(codim, 0.0))) throw InputError("explicit L must contain the origin");
    w.l_body = l_spec.body;
  }
  detail::certify(w, table);
  return w;
}

inline HannerWitness build_hanner(ProjectionTable& table, const IndexSet& sigma, const LSpec& l_spec = {},
                                  const TupleOptions& opt = {}, CoverCatalog* catalog = nullptr) {
  return build_hanner(table, minimal_tuple(table, sigma, opt, catalog), l_spec);
}

/// Recomputes every certificate of `w` against the body.
inline HannerWitness verify_witness(HannerWitness w, ProjectionTable& table) {
  if (w.n != table.n()) throw InputError("witness and body have different dimensions");
  for (int i : IndexSet(w.sigma.bits(), w.n).elements()) {
    if (!w.c.count(i) || !(w.c.at(i) > 0.0)) throw InputError("witness coefficient c_" + std::to_string(i) + " missing");
  }
  detail::certify(w, table);
  return w;
}

enum class HannerMode { random, linf, l1 };

/// Random Hanner polytope: coordinates are split recursively, leaves are
/// symmetric segments, and each inner node joins its halves by an l-infinity sum
/// (Minkowski sum) or an l1 sum (convex hull of the union).
inline VPolytope generate_hanner(int n, std::uint64_t seed, HannerMode mode = HannerMode::random) {
  if (n < 1 || n > 6) throw CapacityError("Hanner generator supports 1 <= n <= 6");
  Rng rng(seed);
  std::vector<int> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(coords[i], coords[rng.below(i + 1)]);
  // Returns full-length points supported on `block`.
  auto build = [&](auto&& self, std::vector<int> block) -> std::vector<Point> {
    if (block.size() == 1) {
      const double a = rng.uniform(0.5, 2.0);
      Point lo(n, 0.0), hi(n, 0.0);
      lo[block[0]] = -a;
      hi[block[0]] = a;
      return {lo, hi};
    }
    const std::size_t cut = 1 + rng.below(block.size() - 1);
    const std::vector<int> left(block.begin(), block.begin() + cut);
    const std::vector<int> right(block.begin() + cut, block.end());
    const auto a = self(self, left);
    const auto b = self(self, right);
    bool linf = mode == HannerMode::linf;
    if (mode == HannerMode::random) linf = rng.uniform() < 0.5;
    std::vector<Point> out;
    if (linf) {
      for (const auto& u : a) {
        for (const auto& v : b) {
          Point s(n);
          for (int i = 0; i < n; ++i) s[i] = u[i] + v[i];
          out.push_back(std::move(s));
        }
      }
    } else {
      out = a;
      out.insert(out.end(), b.begin(), b.end());
    }
    return out;
  };
  return VPolytope(build(build, coords));
}

}  // namespace btiso
