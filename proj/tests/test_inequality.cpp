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

Cover lw3() { return validate_cover(IndexSet::full(3), {S({2, 3}, 3), S({1, 3}, 3), S({1, 2}, 3)}); }
Cover pair12() { return validate_cover(S({1, 2}, 3), {S({1}, 3), S({2}, 3)}); }

QuadratureSpec mc_spec(std::uint64_t seed = 1) {
  QuadratureSpec q;
  q.n_samples = 200000;
  q.seed = seed;
  return q;
}

}  // namespace

TEST(BollobasThomason, CubeIsEquality) {
  const auto r = check_bt(make_cube(3), lw3());
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  EXPECT_NEAR(r.rhs, 1.0, 1e-12);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.log_slack, 0.0, 1e-9);
}

TEST(BollobasThomason, CrossPolytopeIsStrict) {
  const auto r = check_bt(make_cross_polytope(3), lw3());
  EXPECT_NEAR(r.lhs, 16.0 / 9.0, 1e-12);
  EXPECT_NEAR(r.rhs, 8.0, 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(BollobasThomason, BoxesAreEqualityUnderEveryCover) {
  const auto box = make_box({0, 0, 0}, {1, 2, 3});
  const auto r = check_bt(box, lw3());
  EXPECT_NEAR(r.lhs, 36.0, 1e-9);
  EXPECT_NEAR(r.rhs, 36.0, 1e-9);
  for (const auto& c : enumerate_irreducible_covers(IndexSet::full(3)).covers) {
    EXPECT_NEAR(check_bt(box, c).log_slack, 0.0, 1e-9) << c.to_string();
  }
}

TEST(LocalInequality, WorkedExamples) {
  const auto cube = check_local_bt(make_cube(3), S({1, 2}, 3), pair12());
  EXPECT_NEAR(cube.lhs, 1.0, 1e-12);
  EXPECT_NEAR(cube.rhs, 4.0 / 3.0, 1e-12);
  EXPECT_TRUE(cube.holds);
  const auto eq = check_local_bt(equality_body(), S({1, 2}, 3), pair12());
  EXPECT_NEAR(eq.lhs, 16.0 / 3.0, 1e-9);
  EXPECT_NEAR(eq.rhs, 16.0 / 3.0, 1e-9);
  EXPECT_NEAR(eq.log_slack, 0.0, 1e-9);
  const auto cross = check_local_bt(make_cross_polytope(3), S({1, 2}, 3), pair12());
  EXPECT_NEAR(cross.lhs, 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(cross.rhs, 16.0 / 3.0, 1e-12);
  EXPECT_GT(cross.log_slack, 0.5);
}

TEST(LocalInequality, ExactRationalEquality) {
  std::vector<std::vector<Rational>> v;
  for (auto [x, y] : {std::pair{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}) v.push_back({Rational(x), Rational(y), Rational(0)});
  v.push_back({Rational(0), Rational(0), Rational(1)});
  v.push_back({Rational(0), Rational(0), Rational(-1)});
  const auto r = check_local_bt_exact(v, S({1, 2}, 3), pair12());
  EXPECT_EQ(r.lhs, rational(16, 3));
  EXPECT_EQ(r.rhs, rational(16, 3));
}

TEST(LocalInequality, HoldsOnRandomBodies) {
  Rng rng(77);
  CoverCatalog catalog;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 2;
    ProjectionTable table(oracle::random_hull(rng, n, 3 * n));
    for (const auto& sigma : subsets_canonical(IndexSet::full(n), false)) {
      if (sigma.size() >= n) continue;
      for (const auto& c : catalog.irreducible(sigma).covers) {
        const auto r = check_local_bt(table, sigma, c);
        EXPECT_GE(r.log_slack, -1e-7) << r.context;
        EXPECT_EQ(r.holds, r.log_slack >= -r.tol);
        EXPECT_GT(r.lhs, 0.0);
        EXPECT_GT(r.rhs, 0.0);
      }
    }
  }
}

TEST(LocalInequality, ScalingLeavesSlackUnchanged) {
  Rng rng(78);
  const auto k = oracle::random_hull(rng, 3, 10);
  const auto big = scale_translate(k, 2.7, {1, 1, -3});
  for (const auto& c : enumerate_irreducible_covers(S({1, 2}, 3)).covers) {
    EXPECT_NEAR(check_local_bt(k, S({1, 2}, 3), c).log_slack, check_local_bt(big, S({1, 2}, 3), c).log_slack, 1e-9);
  }
}

TEST(LocalInequality, RejectsBadArguments) {
  EXPECT_THROW(check_local_bt(make_cube(3), IndexSet::full(3), lw3()), InputError);
  EXPECT_THROW(check_bt(make_cube(3), pair12()), InputError);
  EXPECT_THROW(check_local_bt(VPolytope({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}), S({1, 2}, 3), pair12()), DegenerateError);
}

TEST(DerivedForm, CubeRatios) {
  ProjectionTable t(make_cube(3));
  const auto r = check_theorem1_derived(t, S({1, 2}, 3), pair12());
  EXPECT_NEAR(r.lhs, 3.0, 1e-12);
  EXPECT_NEAR(r.rhs, 4.0, 1e-12);
  EXPECT_TRUE(r.holds);
}

TEST(TauChain, EmptyAndFull) {
  ProjectionTable t(make_cube(3));
  const auto empty = check_tau_chain(t, S({1, 2}, 3), IndexSet::empty_of(3));
  EXPECT_DOUBLE_EQ(empty.lhs, 1.0);
  EXPECT_DOUBLE_EQ(empty.rhs, 1.0);
  const auto full = check_tau_chain(t, S({1, 2}, 3), S({1, 2}, 3));
  EXPECT_NEAR(full.lhs, 3.0, 1e-12);
  EXPECT_NEAR(full.rhs, 4.0, 1e-12);
}

TEST(Berwald, ConicalProfileIsEquality) {
  const auto r = berwald_from_integrals(1.0, 1, 1.0, 2.0, 0.5, 1.0 / 3.0);
  EXPECT_NEAR(r.lhs, 1.0, 1e-10);
  EXPECT_NEAR(r.rhs, 1.0, 1e-10);
  EXPECT_TRUE(r.holds);
}

TEST(Berwald, ConstantProfileIsStrict) {
  const auto r = berwald_from_integrals(1.0, 1, 1.0, 2.0, 1.0, 1.0);
  EXPECT_NEAR(r.lhs, std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(r.rhs, 2.0, 1e-10);
  EXPECT_TRUE(r.holds);
}

TEST(Berwald, QuadratureOnSegmentAndSquare) {
  QuadratureSpec grid;
  grid.method = QuadratureSpec::Method::grid;
  const VPolytope seg({{0.0}, {1.0}});
  const auto line = berwald_check(seg, [](const Point& y) { return 1.0 - y[0]; }, 1.0, 2.0, grid);
  EXPECT_NEAR(line.lhs, 1.0, 1e-10);
  EXPECT_NEAR(line.rhs, 1.0, 1e-10);
  const auto square = make_box({-1, -1}, {1, 1});
  const auto cone = berwald_check(square, [&](const Point& y) { return 1.0 - minkowski_functional(square, y); }, 1.0,
                                  2.0, grid);
  EXPECT_NEAR(cone.log_slack, 0.0, 1e-6);
  const auto mc = berwald_check(square, [&](const Point& y) { return 1.0 - minkowski_functional(square, y); }, 1.0,
                                2.0, mc_spec());
  EXPECT_LE(std::abs(mc.log_slack), 4.0 * mc.std_error);
}

TEST(Appendix, CubeStepsHold) {
  ProjectionTable t(make_cube(3));
  const auto a = audit_appendix(t, S({1, 2}, 3), pair12(), mc_spec());
  ASSERT_EQ(a.steps.size(), 3u);
  for (const auto& st : a.steps) EXPECT_TRUE(st.holds) << st.name;
  EXPECT_LE(std::abs(a.steps[0].log_slack), 4.0 * a.steps[0].std_error + 1e-12);
  EXPECT_TRUE(a.chain_consistent);
}

TEST(Appendix, EqualityBodyStepsAreTight) {
  ProjectionTable t(equality_body());
  const auto a = audit_appendix(t, S({1, 2}, 3), pair12(), mc_spec(2));
  for (const auto& st : a.steps) {
    EXPECT_LE(std::abs(st.log_slack), 4.0 * st.std_error + 1e-9) << st.name;
  }
  EXPECT_TRUE(a.chain_consistent);
}

// The total slack log 2 of the crosspolytope is carried by the slice step; the
// outer integral steps are tight because each slice profile is conical.
TEST(Appendix, CrossPolytopeSlackSitsInSliceStep) {
  ProjectionTable t(make_cross_polytope(3));
  const auto a = audit_appendix(t, S({1, 2}, 3), pair12(), mc_spec(3));
  EXPECT_NEAR(a.total.log_slack, std::log(2.0), 1e-12);
  EXPECT_GT(a.steps[0].log_slack, 10.0 * a.steps[0].std_error);
  for (const auto& st : a.steps) EXPECT_TRUE(st.holds) << st.name;
  EXPECT_TRUE(a.chain_consistent);
}

TEST(Appendix, GridQuadratureAgrees) {
  Rng rng(3);
  ProjectionTable t(oracle::random_hull(rng, 3, 10));
  QuadratureSpec grid;
  grid.method = QuadratureSpec::Method::grid;
  for (const auto& sigma : {S({1}, 3), S({1, 2}, 3)}) {
    for (const auto& cov : enumerate_irreducible_covers(sigma).covers) {
      const auto a = audit_appendix(t, sigma, cov, grid);
      for (const auto& st : a.steps) EXPECT_TRUE(st.holds) << st.name << " " << st.context;
      EXPECT_TRUE(a.chain_consistent) << cov.to_string();
    }
  }
}
