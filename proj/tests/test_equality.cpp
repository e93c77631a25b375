#include <gtest/gtest.h>

#include "btiso/btiso.hpp"
#include "oracles.hpp"

using namespace btiso;

namespace {

IndexSet S(std::initializer_list<int> e, int n) { return IndexSet::of(e, n); }

VPolytope equality_body() {
  return VPolytope({{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}, {1, 1, 0}, {0, 0, 1}, {0, 0, -1}});
}

Cover pair12() { return validate_cover(S({1, 2}, 3), {S({1}, 3), S({2}, 3)}); }

}  // namespace

TEST(Conical, PyramidOverSquare) {
  ProjectionTable t(VPolytope({{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}, {1, 1, 0}, {0, 0, 1}}));
  const auto fit = conical_hypograph_check(t, S({3}, 3));
  EXPECT_TRUE(fit.conical) << fit.residual;
  EXPECT_TRUE(fit.slices_scale);
  ASSERT_EQ(fit.apex_point.size(), 1u);
  EXPECT_NEAR(fit.apex_point[0], 0.0, 1e-6);
  EXPECT_NEAR(fit.sup_value, 2.0, 1e-9);
}

TEST(Conical, CubeProfileIsFlat) {
  ProjectionTable t(make_cube(3));
  const auto fit = conical_hypograph_check(t, S({3}, 3));
  EXPECT_FALSE(fit.conical);
  EXPECT_GE(fit.residual, 0.0);
  EXPECT_TRUE(t.projection(S({3}, 3)).contains(fit.apex_point));
}

// Both halves of the double cone are cones over the same base with a common
// apex level at the widest slice, so the profile 1 - |t| is the cone function
// of the segment [-1, 1] about 0.
TEST(Conical, DoubleConeIsConicalAboutCentre) {
  ProjectionTable t(make_cross_polytope(3));
  const auto fit = conical_hypograph_check(t, S({3}, 3));
  EXPECT_TRUE(fit.conical) << fit.residual;
  EXPECT_TRUE(fit.slices_scale);
  EXPECT_NEAR(fit.apex_point[0], 0.0, 1e-6);
}

TEST(Conical, ZeroResidualImpliesScaledSlices) {
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    ProjectionTable t(generate_hanner(3, rng.next_u64()));
    for (int h = 1; h <= 3; ++h) {
      const auto fit = conical_hypograph_check(t, S({h}, 3));
      EXPECT_GE(fit.residual, 0.0);
      if (fit.conical) EXPECT_TRUE(fit.slices_scale) << "H=" << h;
    }
  }
}

TEST(Characterization, EqualityBodyAllConditionsHold) {
  const auto rep = detect_equality(equality_body(), S({1, 2}, 3), pair12());
  EXPECT_LE(std::abs(rep.equality_slack), 1e-9);
  EXPECT_TRUE(rep.equality);
  EXPECT_TRUE(rep.cond1.holds) << rep.cond1.max_residual;
  EXPECT_TRUE(rep.cond2.holds) << rep.cond2.max_residual;
  EXPECT_TRUE(rep.cond3.holds) << rep.cond3.max_residual;
  EXPECT_LE(rep.cond1.max_residual, 1e-7);
  EXPECT_LE(rep.cond2.max_residual, 1e-7);
  EXPECT_LE(rep.cond3.max_residual, 1e-7);
  EXPECT_TRUE(rep.verdict_consistent);
  ASSERT_EQ(rep.apex_point.size(), 1u);
  EXPECT_NEAR(rep.apex_point[0], 0.0, 1e-6);
  // Constant segment ratio across the parts.
  for (const auto& z : rep.cond2.fitted_translations) {
    for (double v : z) EXPECT_NEAR(v, 0.0, 1e-9);
  }
}

TEST(Characterization, CrossPolytopeFailsSumCondition) {
  const auto rep = detect_equality(make_cross_polytope(3), S({1, 2}, 3), pair12());
  EXPECT_FALSE(rep.equality);
  EXPECT_FALSE(rep.cond1.holds);
  EXPECT_TRUE(rep.cond2.holds);
  EXPECT_FALSE(rep.conditions_hold);
  EXPECT_TRUE(rep.verdict_consistent);
}

TEST(Characterization, CubeHasSlackAndAFailingCondition) {
  const auto rep = detect_equality(make_cube(3), S({1, 2}, 3), pair12());
  EXPECT_NEAR(rep.equality_slack, std::log(4.0 / 3.0), 1e-9);
  EXPECT_TRUE(rep.cond1.holds);
  EXPECT_FALSE(rep.conditions_hold);
  EXPECT_TRUE(rep.verdict_consistent);
}

TEST(Characterization, BoxesDecompose) {
  const auto box = make_box({0, 0, 0, 0}, {1, 2, 0.5, 3});
  for (const auto& sigma : {S({1, 2}, 4), S({1, 2, 3}, 4)}) {
    for (const auto& c : enumerate_irreducible_covers(sigma).covers) {
      EXPECT_TRUE(detect_equality(box, sigma, c).cond1.holds) << c.to_string();
    }
  }
}

TEST(Characterization, HannerBodiesAreConsistent) {
  CoverCatalog catalog;
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    ProjectionTable t(generate_hanner(3, seed));
    for (const auto& sigma : subsets_canonical(IndexSet::full(3), false)) {
      if (sigma.size() >= 3) continue;
      for (const auto& c : catalog.irreducible(sigma).covers) {
        const auto rep = detect_equality(t, sigma, c);
        EXPECT_TRUE(rep.verdict_consistent) << "seed " << seed << " " << rep.inequality.context;
        hits += rep.equality ? 1 : 0;
      }
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(Characterization, CapacityLimit) {
  const auto k = make_cube(6);
  const auto sigma = S({1, 2, 3, 4, 5}, 6);
  const auto c = validate_cover(sigma, {sigma});
  EXPECT_THROW(detect_equality(k, sigma, c), CapacityError);
}
