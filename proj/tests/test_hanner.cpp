#include <gtest/gtest.h>

#include <cmath>

#include "btiso/btiso.hpp"
#include "oracles.hpp"

using namespace btiso;

namespace {

IndexSet S(std::initializer_list<int> e, int n) { return IndexSet::of(e, n); }

VPolytope equality_body() {
  return VPolytope({{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}, {1, 1, 0}, {0, 0, 1}, {0, 0, -1}});
}

// t_tau equals the product of its singleton values.
double product_residual(const MinimalTuple& mt, int n) {
  double worst = 0.0;
  for (const auto& tau : subsets_canonical(mt.sigma, true)) {
    double prod = 1.0;
    for (int i : tau.elements()) prod *= mt.t_of(S({i}, n));
    worst = std::max(worst, std::abs(mt.t_of(tau) / prod - 1.0));
  }
  return worst;
}

}  // namespace

TEST(Ratios, CubeAndCross) {
  ProjectionTable cube(make_cube(3));
  const auto r = projection_ratios(cube, S({1, 2}, 3));
  EXPECT_NEAR(r.x_sigma, 3.0, 1e-12);
  EXPECT_NEAR(r.d_of(S({1}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(r.d_of(S({2}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(r.d_of(S({1, 2}, 3)), 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.d_of(IndexSet::empty_of(3)), 1.0);
  ProjectionTable cross(make_cross_polytope(3));
  const auto c = projection_ratios(cross, S({1, 2}, 3));
  EXPECT_NEAR(c.x_sigma, 2.0, 1e-12);
  EXPECT_NEAR(c.d_of(S({1}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(c.d_of(S({1, 2}, 3)), 2.0, 1e-12);
}

TEST(Constraints, RowsForPair) {
  ProjectionTable cube(make_cube(3));
  const auto r = projection_ratios(cube, S({1, 2}, 3));
  const auto covers = enumerate_irreducible_covers(S({1, 2}, 3)).covers;
  const auto hp = build_constraints(r, covers);
  ASSERT_EQ(hp.vars.size(), 3u);
  EXPECT_EQ(hp.eq_labels.size(), 1u);
  int caps = 0, type2 = 0;
  for (const auto& l : hp.le_labels) {
    caps += l.rfind("cap:", 0) == 0;
    type2 += l.rfind("type2:", 0) == 0;
  }
  EXPECT_EQ(caps, 2);  // the pinned sigma coordinate needs no cap
  EXPECT_GE(type2, 1);
  // The ratios themselves satisfy every row.
  std::vector<double> u;
  for (const auto& v : hp.vars) u.push_back(std::log(r.d_of(v)));
  EXPECT_LE(max_violation(hp.lp, u), 1e-12);
}

TEST(Constraints, SingletonPinnedAndFeasible) {
  Rng rng(4);
  ProjectionTable t(oracle::random_hull(rng, 3, 9));
  const auto r = projection_ratios(t, S({2}, 3));
  EXPECT_LE(r.x_sigma, r.d_of(S({2}, 3)) * (1 + 1e-12));
  const auto mt = minimal_tuple(t, S({2}, 3));
  EXPECT_NEAR(mt.t_of(S({2}, 3)), r.x_sigma, 1e-9 * r.x_sigma);
}

TEST(MinimalTuple, CubeWorkedExample) {
  ProjectionTable t(make_cube(3));
  const auto mt = minimal_tuple(t, S({1, 2}, 3));
  ASSERT_TRUE(mt.verified) << mt.diagnostic;
  EXPECT_NEAR(mt.t_of(S({1}, 3)), 1.5, 1e-12);
  EXPECT_NEAR(mt.t_of(S({2}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(mt.t_of(S({1, 2}, 3)), 3.0, 1e-12);
}

TEST(MinimalTuple, BoxWorkedExample) {
  ProjectionTable t(make_box({0, 0, 0}, {1, 2, 3}));
  const auto r = projection_ratios(t, S({1, 2}, 3));
  EXPECT_NEAR(r.x_sigma, 6.0, 1e-12);
  EXPECT_NEAR(r.d_of(S({1}, 3)), 2.0, 1e-12);
  EXPECT_NEAR(r.d_of(S({2}, 3)), 4.0, 1e-12);
  const auto mt = minimal_tuple(t, S({1, 2}, 3));
  EXPECT_NEAR(mt.t_of(S({1}, 3)), 1.5, 1e-12);
  EXPECT_NEAR(mt.t_of(S({2}, 3)), 4.0, 1e-12);
}

TEST(MinimalTuple, InvariantsOnRandomBodies) {
  Rng rng(19);
  CoverCatalog catalog;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 2;
    ProjectionTable t(oracle::random_hull(rng, n, 3 * n));
    for (const auto& sigma : subsets_canonical(IndexSet::full(n), false)) {
      if (sigma.size() >= n) continue;
      const auto mt = minimal_tuple(t, sigma, {}, &catalog);
      ASSERT_TRUE(mt.verified) << sigma.to_string() << ": " << mt.diagnostic;
      EXPECT_NEAR(mt.t_of(sigma), mt.ratios.x_sigma, 1e-9 * mt.ratios.x_sigma);
      EXPECT_LE(product_residual(mt, n), 1e-8);
      for (const auto& tau : subsets_canonical(sigma, false)) {
        EXPECT_GE(mt.t_of(tau), mt.lower_bound * (1 - 1e-9));
        EXPECT_LE(mt.t_of(tau), mt.upper_bound * (1 + 1e-9));
      }
      // Minimality: no coordinate can drop by a factor 1 - 1e-6.
      const auto covers = catalog.irreducible(sigma).covers;
      const auto hp = build_constraints(mt.ratios, covers);
      std::vector<double> u;
      for (const auto& v : hp.vars) u.push_back(std::log(mt.t_of(v)));
      for (std::size_t i = 0; i < u.size(); ++i) {
        EXPECT_FALSE(can_decrease(hp.lp, u, static_cast<int>(i), -std::log1p(-1e-6)));
      }
    }
  }
}

TEST(ClosedForm, Examples) {
  const std::map<int, double> c{{1, 0.75}, {2, 1.0}};
  EXPECT_NEAR(hanner_closed_form(c, 1.0, S({1, 2}, 3), 1), 1.0, 1e-12);
  EXPECT_NEAR(hanner_closed_form(c, 2.5, IndexSet::empty_of(3), 1), 2.5, 1e-12);
  const std::map<int, double> unit{{1, 1.0}, {2, 1.0}};
  EXPECT_NEAR(hanner_closed_form(unit, 2.0, S({1, 2}, 3), 1), 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(hanner_closed_form(unit, 2.0, S({1, 2}, 3), 1), equality_body().volume(), 1e-12);
}

TEST(Witness, CubeCertificates) {
  ProjectionTable t(make_cube(3));
  const auto w = build_hanner(t, S({1, 2}, 3));
  EXPECT_NEAR(w.c.at(1), 0.75, 1e-12);
  EXPECT_NEAR(w.c.at(2), 1.0, 1e-12);
  EXPECT_NEAR(w.l_polytope().volume(), 1.0, 1e-12);
  EXPECT_TRUE(w.all_pass);
  EXPECT_NEAR(w.vol_equal.lhs, 1.0, 1e-12);
  for (const auto& cert : w.projection_dominance) {
    EXPECT_TRUE(cert.pass) << cert.name;
    if (cert.name == "projection_dominance:1") EXPECT_NEAR(cert.rhs, 0.75, 1e-12);
    if (cert.name == "projection_dominance:2") EXPECT_NEAR(cert.rhs, 1.0, 1e-12);
  }
}

TEST(Witness, EqualityBodyReproducesItself) {
  ProjectionTable t(equality_body());
  const auto w = build_hanner(t, S({1, 2}, 3));
  EXPECT_TRUE(w.all_pass);
  for (const auto& cert : w.projection_dominance) EXPECT_NEAR(cert.lhs, cert.rhs, 1e-9) << cert.name;
}

TEST(Witness, ExplicitL) {
  ProjectionTable t(make_cube(3));
  LSpec spec;
  spec.mode = HannerWitness::LMode::explicit_body;
  spec.body = VPolytope({{-0.25}, {0.75}});
  const auto w = build_hanner(t, S({1, 2}, 3), spec);
  EXPECT_TRUE(w.all_pass);
  spec.body = VPolytope({{0.25}, {1.25}});
  EXPECT_THROW(build_hanner(t, S({1, 2}, 3), spec), InputError);
  spec.body = VPolytope({{-1.0}, {1.0}});
  EXPECT_THROW(build_hanner(t, S({1, 2}, 3), spec), InputError);
}

TEST(Witness, TamperedScaleFailsDominance) {
  ProjectionTable t(make_cube(3));
  auto w = build_hanner(t, S({1, 2}, 3));
  w.c[1] = 0.9;
  const auto v = verify_witness(w, t);
  EXPECT_FALSE(v.all_pass);
  bool dominance_failed = false;
  for (const auto& cert : v.projection_dominance) dominance_failed = dominance_failed || !cert.pass;
  EXPECT_TRUE(dominance_failed);
}

TEST(Witness, RandomBodiesAllCertificates) {
  Rng rng(23);
  CoverCatalog catalog;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 2;
    ProjectionTable t(oracle::random_hull(rng, n, 3 * n));
    for (const auto& sigma : subsets_canonical(IndexSet::full(n), false)) {
      if (sigma.size() >= n) continue;
      const auto w = build_hanner(t, sigma, {}, {}, &catalog);
      EXPECT_TRUE(w.all_pass) << sigma.to_string();
      // Closed form against the hull of the explicitly built body.
      for (const auto& cert : w.closed_vs_hull) EXPECT_LE(cert.residual, 1e-8) << cert.name;
    }
  }
}

TEST(Generator, ShapesAndVolumes) {
  const auto seg = generate_hanner(1, 5);
  EXPECT_EQ(seg.vertices().size(), 2u);
  const auto box = generate_hanner(4, 9, HannerMode::linf);
  EXPECT_EQ(box.vertices().size(), 16u);
  const auto cross = generate_hanner(4, 9, HannerMode::l1);
  EXPECT_EQ(cross.vertices().size(), 8u);
  double prod = 1.0;
  for (const auto& v : cross.vertices()) {
    for (double x : v) {
      if (x > 0) prod *= x;
    }
  }
  EXPECT_NEAR(cross.volume(), 16.0 * prod / 24.0, 1e-12 * cross.volume());
  EXPECT_THROW(generate_hanner(7, 1), CapacityError);
}

TEST(Generator, Reproducible) {
  const auto a = generate_hanner(4, 123);
  const auto b = generate_hanner(4, 123);
  EXPECT_EQ(a.vertices(), b.vertices());
}
