#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "btiso/cover.hpp"
#include "btiso/error.hpp"
#include "btiso/inequality.hpp"
#include "btiso/parallel.hpp"
#include "btiso/polytope.hpp"

namespace btiso {

inline constexpr double kDefaultEqualityTol = 1e-7;
inline constexpr int kDefaultSampleNodes = 200;

namespace detail {

inline double diameter(const VPolytope& p) {
  const auto& v = p.vertices();
  double best = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) best = std::max(best, linalg::norm(linalg::sub(v[a], v[b])));
  }
  return best;
}

/// Sum of bodies living in disjoint coordinate blocks of R^dim: the vertex set is
/// the product of the vertex sets.
inline VPolytope block_sum(const std::vector<std::pair<const VPolytope*, std::vector<int>>>& blocks, int dim) {
  std::vector<Point> pts{Point(dim, 0.0)};
  for (const auto& [body, positions] : blocks) {
    std::vector<Point> next;
    for (const auto& base : pts) {
      for (const auto& v : body->vertices()) {
        Point x = base;
        for (std::size_t j = 0; j < positions.size(); ++j) x[positions[j]] += v[j];
        next.push_back(std::move(x));
      }
    }
    pts = std::move(next);
  }
  return VPolytope(std::move(pts));
}

/// Sections P_{H_rho + H_sigma^perp}(K) ∩ (y + H_rho) in rho coordinates, for y
/// given in sigma-perp coordinates.
class Sections {
 public:
  Sections(ProjectionTable& table, const IndexSet& sigma)
      : table_(table), n_(table.n()), sigma_(sigma.bits(), table.n()), perp_(sigma_.complement()) {}

  std::optional<VPolytope> at(const IndexSet& rho_in, const Point& y) const {
    const IndexSet rho(rho_in.bits(), n_);
    const IndexSet coords = rho | perp_;
    const VPolytope proj = table_.projection(coords);
    const int dim = coords.size();
    Point x(dim, 0.0);
    const auto perp_elems = perp_.elements();
    for (std::size_t r = 0; r < perp_elems.size(); ++r) x[coords.rank_of(perp_elems[r])] = y[r];
    std::uint32_t local = 0;
    for (int e : rho.elements()) local |= 1u << coords.rank_of(e);
    return slice(proj.hrep(), x, IndexSet(local, dim));
  }

  /// vol(section)^{1/|rho|}; zero for an empty section.
  double root_volume(const IndexSet& rho, const Point& y) const {
    const auto s = at(rho, y);
    if (!s) return 0.0;
    const int k = IndexSet(rho.bits(), n_).size();
    return std::pow(s->measure(k), 1.0 / k);
  }

  const IndexSet& sigma() const { return sigma_; }
  const IndexSet& perp() const { return perp_; }
  ProjectionTable& table() const { return table_; }

 private:
  ProjectionTable& table_;
  int n_;
  IndexSet sigma_;
  IndexSet perp_;
};

/// About `count` nodes from barycentric grids on the fan simplices of `base`,
/// deduplicated and pulled towards the centroid by a relative 1e-6.
inline std::vector<Point> grid_nodes(const VPolytope& base, int count) {
  const auto& tri = base.triangulation();
  const int d = base.ambient_dim();
  const std::size_t simplices = std::max<std::size_t>(tri.simplices.size(), 1);
  int level = 1;
  auto per_simplex = [&](int l) {
    double c = 1.0;
    for (int j = 1; j <= d; ++j) c = c * (l + j) / j;
    return c;
  };
  while (per_simplex(level + 1) * simplices <= count) ++level;
  std::vector<Point> pts;
  std::vector<int> weights(d + 1, 0);
  for (const auto& simplex : tri.simplices) {
    // enumerate compositions of `level` into d+1 parts
    std::function<void(int, int)> rec = [&](int slot, int left) {
      if (slot == d) {
        weights[d] = left;
        Point x(d, 0.0);
        for (int j = 0; j <= d; ++j) {
          const auto& v = tri.points[simplex[j]];
          for (int c = 0; c < d; ++c) x[c] += v[c] * weights[j] / level;
        }
        pts.push_back(std::move(x));
        return;
      }
      for (int w = 0; w <= left; ++w) {
        weights[slot] = w;
        rec(slot + 1, left - w);
      }
    };
    rec(0, level);
  }
  pts = merge_close(std::move(pts), 1e-12 * std::max(base.scale(), 1e-300));
  const Point centre = base.vertex_centroid();
  for (auto& x : pts) {
    for (int c = 0; c < d; ++c) x[c] += 1e-6 * (centre[c] - x[c]);
  }
  return pts;
}

/// Maximizer of a concave `objective` over `base` by nested golden-section search
/// along the coordinates. Plateaus resolve towards smaller coordinates.
inline Point golden_argmax(const VPolytope& base, const std::function<double(const Point&)>& objective) {
  const int d = base.ambient_dim();
  const double tol = (d <= 2 ? 1e-10 : 1e-8) * std::max(base.scale(), 1e-300);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto& h = base.hrep();
  std::function<std::pair<double, Point>(Point&, int)> search = [&](Point& prefix, int level) -> std::pair<double, Point> {
    if (level == d) return {objective(prefix), prefix};
    std::uint32_t free_bits = 0;
    for (int c = level; c < d; ++c) free_bits |= 1u << c;
    const auto fiber = slice(h, prefix, IndexSet(free_bits, d));
    if (!fiber) return {-std::numeric_limits<double>::infinity(), prefix};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : fiber->vertices()) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    auto eval = [&](double t) {
      Point p = prefix;
      p[level] = t;
      return search(p, level + 1);
    };
    double a = lo, b = hi;
    double c = b - phi * (b - a), e = a + phi * (b - a);
    auto fc = eval(c), fe = eval(e);
    while (b - a > tol) {
      if (fc.first >= fe.first) {
        b = e;
        e = c;
        fe = std::move(fc);
        c = b - phi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = e;
        fc = std::move(fe);
        e = a + phi * (b - a);
        fe = eval(e);
      }
    }
    auto best = fc.first >= fe.first ? fc : fe;
    for (double t : {lo, hi}) {
      auto end = eval(t);
      if (end.first > best.first) best = std::move(end);
    }
    return best;
  };
  Point start(d, 0.0);
  return search(start, 0).second;
}

/// Best of the grid nodes and the golden-section refinement; values within a
/// relative 1e-12 of the maximum count as ties, broken by the lexicographically
/// smallest point.
inline Point locate_apex(const VPolytope& base, const std::vector<Point>& nodes, const std::vector<double>& node_values,
                         const std::function<double(const Point&)>& objective) {
  std::vector<std::pair<double, Point>> cand;
  for (std::size_t j = 0; j < nodes.size(); ++j) cand.emplace_back(node_values[j], nodes[j]);
  Point refined = golden_argmax(base, objective);
  cand.emplace_back(objective(refined), std::move(refined));
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : cand) best = std::max(best, c.first);
  const double slack = 1e-12 * std::max(1.0, std::abs(best));
  const Point* pick = nullptr;
  for (const auto& c : cand) {
    if (c.first >= best - slack && (pick == nullptr || c.second < *pick)) pick = &c.second;
  }
  return *pick;
}

/// 1 - ||y - y0|| with the functional of (base - y0).
inline double cone_factor(const VPolytope& centred_base, const Point& y, const Point& y0) {
  return 1.0 - minkowski_functional(centred_base, linalg::sub(y, y0), true);
}

}  // namespace detail

/// Fit of f(y) = vol(K ∩ (y + H^perp))^{1/(n-|H|)} to the cone over P_H K with apex y0.
struct ConicalFit {
  VPolytope base;
  Point apex_point;
  double sup_value = 0.0;
  double residual = 0.0;        // max |f(y) - (1 - ||y - y0||) sup| / sup over the nodes
  bool conical = false;
  double slice_residual = 0.0;  // max relative distance of slices from translated scalings of the apex slice
  bool slices_scale = false;
  int nodes = 0;
};

inline ConicalFit conical_hypograph_check(ProjectionTable& table, const IndexSet& h_in,
                                          int sample_count = kDefaultSampleNodes, double tol = kDefaultEqualityTol) {
  const int n = table.n();
  const IndexSet h(h_in.bits(), n);
  if (h.empty() || h.size() == n) throw InputError("H must be a proper nonempty coordinate set");
  // Sections works with "sigma" = the slice directions and "perp" = H.
  const IndexSet dirs = h.complement();
  detail::Sections sections(table, dirs);
  ConicalFit fit;
  fit.base = table.projection(h);
  if (!fit.base.full_dimensional()) throw DegenerateError("projection onto H is degenerate");
  const auto nodes = detail::grid_nodes(fit.base, sample_count);
  fit.nodes = static_cast<int>(nodes.size());
  auto f = [&](const Point& y) { return sections.root_volume(dirs, y); };
  std::vector<double> values(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t j) { values[j] = f(nodes[j]); });
  fit.apex_point = detail::locate_apex(fit.base, nodes, values, f);
  fit.sup_value = f(fit.apex_point);
  if (!(fit.sup_value > 0.0)) throw DegenerateError("slice function vanishes at its maximizer");
  const Point neg = [&] {
    Point z(fit.apex_point.size());
    for (std::size_t c = 0; c < z.size(); ++c) z[c] = -fit.apex_point[c];
    return z;
  }();
  const VPolytope centred = scale_translate(fit.base, 1.0, neg);
  const auto apex_slice = sections.at(dirs, fit.apex_point);
  std::vector<double> res(nodes.size()), sres(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t j) {
    const double lambda = detail::cone_factor(centred, nodes[j], fit.apex_point);
    res[j] = std::abs(values[j] - lambda * fit.sup_value) / fit.sup_value;
    const auto s = sections.at(dirs, nodes[j]);
    if (!s || !apex_slice || lambda <= 0.0) {
      sres[j] = std::numeric_limits<double>::infinity();
      return;
    }
    const VPolytope scaled = scale_translate(*apex_slice, lambda, Point(apex_slice->ambient_dim(), 0.0));
    const double scale = std::max({detail::diameter(*s), detail::diameter(scaled), 1e-300});
    sres[j] = equal_up_to_translation(*s, scaled, 0.0).distance / scale;
  });
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    fit.residual = std::max(fit.residual, res[j]);
    fit.slice_residual = std::max(fit.slice_residual, sres[j]);
  }
  fit.conical = fit.residual <= tol;
  fit.slices_scale = fit.slice_residual <= tol;
  return fit;
}

struct ConditionReport {
  std::string name;
  bool holds = false;
  double max_residual = 0.0;
  std::vector<Point> fitted_translations;  // one per node (per node and part for the second condition)
  std::vector<std::pair<std::string, double>> constants;
};

struct CharacterizationReport {
  IndexSet sigma;
  Cover cover;
  std::vector<IndexSet> induced;
  Point apex_point;  // y0 in sigma-perp coordinates; empty when no part differs from sigma
  InequalityReport inequality;
  double equality_slack = 0.0;
  ConditionReport cond1, cond2, cond3;
  bool conditions_hold = false;
  bool equality = false;
  bool verdict_consistent = false;
  int nodes = 0;
  double tol = kDefaultEqualityTol;
};

namespace detail {

/// Per-node section data shared by the three condition checks.
struct NodeSections {
  std::optional<VPolytope> full;                 // K ∩ (y + H_sigma)
  std::vector<std::optional<VPolytope>> atoms;   // one per induced atom
  std::vector<std::optional<VPolytope>> sums;    // one per nontrivial part: sum over M_i
};

struct CharacterizationSetup {
  IndexSet sigma;
  std::vector<IndexSet> atoms;
  std::vector<IndexSet> rest;                 // sigma \ sigma_i for nontrivial parts
  std::vector<std::vector<int>> members;      // M_i as atom indices
  std::vector<std::string> labels;            // part labels
};

inline CharacterizationSetup characterization_setup(const IndexSet& sigma, const Cover& c) {
  CharacterizationSetup cs;
  cs.sigma = sigma;
  cs.atoms = induced_one_cover(c);
  for (const auto& p : c.parts) {
    const IndexSet part(p.bits(), sigma.ground_n());
    const IndexSet rest = sigma - part;
    if (rest.empty()) continue;
    std::vector<int> m;
    for (std::size_t j = 0; j < cs.atoms.size(); ++j) {
      if (IndexSet(cs.atoms[j].bits(), sigma.ground_n()).is_subset_of(rest)) m.push_back(static_cast<int>(j));
    }
    cs.rest.push_back(rest);
    cs.members.push_back(std::move(m));
    cs.labels.push_back(part.to_string());
  }
  return cs;
}

inline NodeSections node_sections(const Sections& sec, const CharacterizationSetup& cs, const Point& y) {
  NodeSections ns;
  const int n = sec.table().n();
  const IndexSet sigma(cs.sigma.bits(), n);
  ns.full = slice(sec.table().body().hrep(), [&] {
    Point x(n, 0.0);
    const auto pe = sec.perp().elements();
    for (std::size_t r = 0; r < pe.size(); ++r) x[pe[r] - 1] = y[r];
    return x;
  }(), sigma);
  for (const auto& a : cs.atoms) ns.atoms.push_back(sec.at(a, y));
  for (std::size_t i = 0; i < cs.rest.size(); ++i) {
    const IndexSet rest(cs.rest[i].bits(), n);
    std::vector<std::pair<const VPolytope*, std::vector<int>>> blocks;
    bool ok = true;
    for (int j : cs.members[i]) {
      if (!ns.atoms[j]) {
        ok = false;
        break;
      }
      std::vector<int> pos;
      for (int e : IndexSet(cs.atoms[j].bits(), n).elements()) pos.push_back(rest.rank_of(e));
      blocks.emplace_back(&*ns.atoms[j], std::move(pos));
    }
    ns.sums.push_back(ok ? std::optional<VPolytope>(block_sum(blocks, rest.size())) : std::nullopt);
  }
  return ns;
}

}  // namespace detail

/// Runs the local inequality and the three equality conditions on a node grid
/// over P_{sigma^perp}K. verdict_consistent records whether "slack <= tol"
/// agrees with "all conditions hold".
inline CharacterizationReport detect_equality(ProjectionTable& table, const IndexSet& sigma_in, const Cover& c,
                                              double tol = kDefaultEqualityTol,
                                              int sample_count = kDefaultSampleNodes) {
  const int n = table.n();
  const IndexSet sigma(sigma_in.bits(), n);
  detail::require_proper(sigma, n);
  detail::require_cover_of(c, sigma_in);
  if (sigma.size() > 4) throw CapacityError("equality analysis slices at most 4-dimensional sections");
  CharacterizationReport rep;
  rep.sigma = sigma;
  rep.cover = c;
  rep.tol = tol;
  rep.inequality = check_local_bt(table, sigma, c, tol);
  rep.equality_slack = rep.inequality.log_slack;
  rep.equality = rep.equality_slack <= tol;

  const auto cs = detail::characterization_setup(sigma, c);
  rep.induced = cs.atoms;
  const detail::Sections sec(table, sigma);
  const VPolytope base = table.projection(sec.perp());
  if (!base.full_dimensional()) throw DegenerateError("projection onto sigma-perp is degenerate");
  auto nodes = detail::grid_nodes(base, sample_count);

  // y0: joint maximizer of the section functions f_i.
  const int parts = static_cast<int>(cs.rest.size());
  auto log_product = [&](const Point& y) {
    double total = 0.0;
    for (int i = 0; i < parts; ++i) {
      const double v = sec.root_volume(cs.rest[i], y);
      if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
      total += std::log(v);
    }
    return total;
  };
  std::vector<double> node_values(nodes.size());
  if (parts > 0) {
    parallel_for(nodes.size(), [&](std::size_t j) { node_values[j] = log_product(nodes[j]); });
    rep.apex_point = detail::locate_apex(base, nodes, node_values, log_product);
    Point pulled = rep.apex_point;
    const Point centre = base.vertex_centroid();
    for (std::size_t k = 0; k < pulled.size(); ++k) pulled[k] += 1e-6 * (centre[k] - pulled[k]);
    nodes.push_back(pulled);
  }
  rep.nodes = static_cast<int>(nodes.size());

  std::vector<detail::NodeSections> data(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t j) { data[j] = detail::node_sections(sec, cs, nodes[j]); });

  // First condition: the section is the sum of the atom sections.
  rep.cond1.name = "charact1";
  {
    std::vector<double> res(nodes.size());
    std::vector<Point> shift(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t j) {
      const auto& d = data[j];
      bool ok = d.full.has_value();
      std::vector<std::pair<const VPolytope*, std::vector<int>>> blocks;
      for (std::size_t a = 0; ok && a < cs.atoms.size(); ++a) {
        if (!d.atoms[a]) {
          ok = false;
          break;
        }
        std::vector<int> pos;
        for (int e : IndexSet(cs.atoms[a].bits(), n).elements()) pos.push_back(sigma.rank_of(e));
        blocks.emplace_back(&*d.atoms[a], std::move(pos));
      }
      if (!ok) {
        res[j] = std::numeric_limits<double>::infinity();
        return;
      }
      const VPolytope sum = detail::block_sum(blocks, sigma.size());
      const auto match = equal_up_to_translation(*d.full, sum, 0.0);
      const double scale = std::max({detail::diameter(*d.full), detail::diameter(sum), 1e-300});
      res[j] = match.distance / scale;
      shift[j] = match.shift;
    });
    for (std::size_t j = 0; j < nodes.size(); ++j) rep.cond1.max_residual = std::max(rep.cond1.max_residual, res[j]);
    rep.cond1.fitted_translations = std::move(shift);
    rep.cond1.holds = rep.cond1.max_residual <= tol;
  }

  rep.cond2.name = "charact2";
  rep.cond3.name = "charact3";
  if (parts == 0) {
    rep.cond2.holds = rep.cond3.holds = true;
  } else {
    // Second condition: sum over M_i is a translated scaling of the y0 reference.
    Point neg(rep.apex_point.size());
    for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -rep.apex_point[k];
    const VPolytope centred = scale_translate(base, 1.0, neg);
    std::vector<std::optional<VPolytope>> refs;
    for (int i = 0; i < parts; ++i) refs.push_back(sec.at(cs.rest[i], rep.apex_point));
    std::vector<double> res(nodes.size(), 0.0);
    std::vector<std::vector<Point>> shifts(nodes.size(), std::vector<Point>(parts));
    parallel_for(nodes.size(), [&](std::size_t j) {
      const double lambda = detail::cone_factor(centred, nodes[j], rep.apex_point);
      for (int i = 0; i < parts; ++i) {
        const auto& s = data[j].sums[i];
        if (!s || !refs[i] || !(lambda > 0.0)) {
          res[j] = std::numeric_limits<double>::infinity();
          continue;
        }
        const VPolytope scaled = scale_translate(*refs[i], lambda, Point(refs[i]->ambient_dim(), 0.0));
        const auto match = equal_up_to_translation(*s, scaled, 0.0);
        const double scale = std::max({detail::diameter(*s), detail::diameter(scaled), 1e-300});
        res[j] = std::max(res[j], match.distance / scale);
        shifts[j][i] = match.shift;
      }
    });
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      rep.cond2.max_residual = std::max(rep.cond2.max_residual, res[j]);
      for (auto& z : shifts[j]) rep.cond2.fitted_translations.push_back(std::move(z));
    }
    rep.cond2.holds = rep.cond2.max_residual <= tol;

    // Third condition: f_i / f_first is constant over the nodes.
    std::vector<std::vector<double>> ratio(parts, std::vector<double>(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      std::vector<double> f(parts, 0.0);
      for (int i = 0; i < parts; ++i) {
        const auto& s = data[j].sums[i];
        if (s) f[i] = std::pow(s->measure(cs.rest[i].size()), 1.0 / cs.rest[i].size());
      }
      for (int i = 0; i < parts; ++i) ratio[i][j] = f[0] > 0.0 ? f[i] / f[0] : std::numeric_limits<double>::quiet_NaN();
    }
    for (int i = 0; i < parts; ++i) {
      std::vector<double> sorted;
      for (double r : ratio[i]) {
        if (std::isfinite(r)) sorted.push_back(r);
      }
      double median = std::numeric_limits<double>::quiet_NaN();
      double worst = std::numeric_limits<double>::infinity();
      if (sorted.size() == ratio[i].size() && !sorted.empty()) {
        std::sort(sorted.begin(), sorted.end());
        median = sorted[sorted.size() / 2];
        worst = 0.0;
        for (double r : ratio[i]) worst = std::max(worst, std::abs(r / median - 1.0));
      }
      rep.cond3.max_residual = std::max(rep.cond3.max_residual, worst);
      rep.cond3.constants.emplace_back("L_" + cs.labels[i], median);
      rep.cond3.constants.emplace_back("alpha_" + cs.labels[i], std::pow(median, -sigma.size()));
    }
    rep.cond3.holds = rep.cond3.max_residual <= tol;
  }
  rep.conditions_hold = rep.cond1.holds && rep.cond2.holds && rep.cond3.holds;
  rep.verdict_consistent = rep.equality == rep.conditions_hold;
  return rep;
}

inline CharacterizationReport detect_equality(const VPolytope& k, const IndexSet& sigma, const Cover& c,
                                              double tol = kDefaultEqualityTol,
                                              int sample_count = kDefaultSampleNodes) {
  ProjectionTable table(k);
  return detect_equality(table, sigma, c, tol, sample_count);
}

}  // namespace btiso
