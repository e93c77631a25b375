#include <gtest/gtest.h>

#include <cmath>

#include "btiso/btiso.hpp"
#include "oracles.hpp"

using namespace btiso;

namespace {

VPolytope equality_body() {
  return VPolytope({{-1, -1, 0}, {1, -1, 0}, {-1, 1, 0}, {1, 1, 0}, {0, 0, 1}, {0, 0, -1}});
}

}  // namespace

TEST(Hull, DropsInteriorPoint) {
  std::vector<Point> pts;
  for (int m = 0; m < 8; ++m) pts.push_back({double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)});
  pts.push_back({0.5, 0.5, 0.5});
  VPolytope p(pts);
  EXPECT_EQ(p.vertices().size(), 8u);
  EXPECT_EQ(p.hrep().rows.size(), 6u);
}

TEST(Hull, UnitSquareHasFourFacets) {
  VPolytope p({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(p.vertices().size(), 4u);
  EXPECT_EQ(p.hrep().rows.size(), 4u);
  EXPECT_NEAR(p.volume(), 1.0, 1e-12);
}

TEST(Hull, MembershipAgreesWithLpFeasibility) {
  Rng rng(11);
  std::vector<Point> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(uniform_in_ball(rng, 3));
  VPolytope p(pts);
  int disagreements = 0;
  for (int t = 0; t < 1000; ++t) {
    Point x = uniform_in_ball(rng, 3);
    for (auto& v : x) v *= 1.2;
    // Points within 1e-7 of the boundary are ambiguous under either tolerance.
    if (oracle::lp_member(pts, x, 1e-7) != oracle::lp_member(pts, x, -1e-7)) continue;
    if (p.contains(x) != oracle::lp_member(pts, x)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(Hull, TriangulationSumsToVolume) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = oracle::random_hull(rng, 3 + trial % 2, 15);
    double sum = 0.0;
    for (double v : p.triangulation().volumes) sum += v;
    EXPECT_NEAR(sum, p.volume(), 1e-12 * p.volume());
    for (double v : p.triangulation().volumes) EXPECT_GT(v, 0.0);
  }
}

TEST(Volume, StandardBodies) {
  EXPECT_NEAR(make_cube(3).volume(), 1.0, 1e-12);
  EXPECT_NEAR(make_cross_polytope(3).volume(), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(equality_body().volume(), 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(make_cross_polytope(5).volume(), 32.0 / 120.0, 1e-12);
}

TEST(Volume, EqualityBodyMatchesSampling) {
  const auto k = equality_body();
  Rng rng(3);
  const auto est = oracle::mc_volume(k.vertices(), [&](const Point& x) { return k.contains(x); }, 400000, rng);
  EXPECT_LE(std::abs(est.value - 8.0 / 3.0), 3.0 * est.std_error);
}

TEST(Volume, PointHasUnitMeasure) {
  VPolytope p({{0.3, 0.2}});
  EXPECT_EQ(p.affine_dim(), 0);
  EXPECT_DOUBLE_EQ(p.volume(), 1.0);
  EXPECT_DOUBLE_EQ(p.measure(2), 0.0);
}

TEST(Projection, CubeAndCrossOntoPlane) {
  const auto s12 = IndexSet::of({1, 2}, 3);
  EXPECT_NEAR(project(make_cube(3), s12).volume(), 1.0, 1e-12);
  EXPECT_NEAR(project(make_cross_polytope(3), s12).volume(), 2.0, 1e-12);
}

TEST(Projection, RandomSimplexMatchesShoelace) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(uniform_in_ball(rng, 4));
    VPolytope p(pts);
    std::vector<Point> planar;
    for (const auto& v : pts) planar.push_back({v[1], v[3]});
    EXPECT_NEAR(project(p, IndexSet::of({2, 4}, 4)).volume(), oracle::planar_hull_area(planar), 1e-12);
  }
}

TEST(Projection, MonotoneUnderInclusion) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = oracle::random_hull(rng, 3, 20);
    // Keep a random subset of the vertices: a sub-body.
    std::vector<Point> sub;
    for (const auto& v : q.vertices()) {
      if (rng.uniform() < 0.7) sub.push_back(v);
    }
    if (sub.size() < 4) continue;
    VPolytope p(sub);
    for (const auto& tau : subsets_canonical(IndexSet::full(3), false)) {
      EXPECT_LE(project(p, tau).measure(tau.size()), project(q, tau).measure(tau.size()) + 1e-9);
    }
  }
}

TEST(Slice, CrossPolytopeAtHalfHeight) {
  const auto s = slice(make_cross_polytope(3).hrep(), {0, 0, 0.5}, IndexSet::of({1, 2}, 3));
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR(s->volume(), 0.5, 1e-12);
}

TEST(Slice, CubeIsUnitSquare) {
  const auto s = slice(make_cube(3).hrep(), {0, 0, 0.3}, IndexSet::of({1, 2}, 3));
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR(s->volume(), 1.0, 1e-12);
  EXPECT_EQ(s->vertices().size(), 4u);
}

TEST(Slice, OutsideIsEmpty) {
  EXPECT_FALSE(slice(make_cube(3).hrep(), {0, 0, 1.5}, IndexSet::of({1, 2}, 3)).has_value());
}

TEST(Slice, AreasMatchSampledSections) {
  Rng rng(17);
  const auto k = oracle::random_hull(rng, 3, 25);
  double zlo = 1e300, zhi = -1e300;
  for (const auto& v : k.vertices()) {
    zlo = std::min(zlo, v[2]);
    zhi = std::max(zhi, v[2]);
  }
  const auto plane = project(k, IndexSet::of({1, 2}, 3));
  for (int j = 1; j <= 10; ++j) {
    const double h = zlo + (zhi - zlo) * j / 11.0;
    const auto s = slice(k.hrep(), {0, 0, h}, IndexSet::of({1, 2}, 3));
    ASSERT_TRUE(s.has_value());
    const auto est = oracle::mc_volume(
        plane.vertices(), [&](const Point& x) { return k.contains({x[0], x[1], h}); }, 100000, rng);
    EXPECT_LE(std::abs(est.value - s->volume()), 3.0 * est.std_error + 1e-12) << "height " << h;
  }
}

// The vertex route and the halfspace route describe the same section.
TEST(Slice, VertexRouteMatchesHalfspaceRoute) {
  Rng rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 3 + trial % 2;
    const auto k = oracle::random_hull(rng, n, 3 * n);
    for (const auto& tau : subsets_canonical(IndexSet::full(n), false)) {
      if (tau.size() == n) continue;
      const auto base_shape = project(k, tau.complement());
      for (int j = 0; j < 5; ++j) {
        // Random convex combination of the base vertices, plus vertices themselves.
        Point base(n, 0.0);
        const auto& bv = base_shape.vertices();
        const auto perp = tau.complement().elements();
        Point y(perp.size(), 0.0);
        if (j == 0) {
          y = bv[0];
        } else {
          double total = 0.0;
          for (const auto& v : bv) {
            const double w = rng.uniform();
            total += w;
            for (std::size_t r = 0; r < y.size(); ++r) y[r] += w * v[r];
          }
          for (auto& c : y) c /= total;
        }
        for (std::size_t r = 0; r < perp.size(); ++r) base[perp[r] - 1] = y[r];
        const auto from_h = slice(k.hrep(), base, tau);
        const auto from_v = slice(k, base, tau);
        ASSERT_EQ(from_h.has_value(), from_v.has_value()) << tau.to_string();
        if (!from_h) continue;
        EXPECT_NEAR(from_h->measure(tau.size()), from_v->measure(tau.size()), 1e-9 * std::pow(k.scale(), tau.size()))
            << tau.to_string() << " trial " << trial;
        EXPECT_EQ(from_h->vertices().size(), from_v->vertices().size()) << tau.to_string();
      }
    }
  }
  EXPECT_FALSE(slice(make_cube(3), {0, 0, 1.5}, IndexSet::of({1, 2}, 3)).has_value());
}

TEST(Minkowski, SegmentsMakeSquare) {
  const auto a = VPolytope({{-1, 0}, {1, 0}});
  const auto b = VPolytope({{0, -1}, {0, 1}});
  const auto s = minkowski_sum(a, b);
  EXPECT_NEAR(s.volume(), 4.0, 1e-12);
  EXPECT_EQ(s.vertices().size(), 4u);
}

TEST(Minkowski, SingletonTranslates) {
  const auto k = make_cross_polytope(3);
  const auto s = minkowski_sum(k, VPolytope({{1, 2, 3}}));
  const auto m = equal_up_to_translation(s, k, 1e-9);
  EXPECT_TRUE(m.equal);
  EXPECT_NEAR(m.shift[0], 1.0, 1e-12);
  EXPECT_NEAR(m.shift[2], 3.0, 1e-12);
}

TEST(Minkowski, BrunnMinkowskiOnRandomPairs) {
  Rng rng(2);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 2 + trial % 2;
    const auto a = oracle::random_hull(rng, n, 8);
    const auto b = oracle::random_hull(rng, n, 8);
    for (double lam : {0.25, 0.5, 0.75}) {
      const auto sum = minkowski_sum(scale_translate(a, 1 - lam, Point(n, 0.0)), scale_translate(b, lam, Point(n, 0.0)));
      const double lhs = std::pow(sum.volume(), 1.0 / n);
      const double rhs = (1 - lam) * std::pow(a.volume(), 1.0 / n) + lam * std::pow(b.volume(), 1.0 / n);
      EXPECT_GE(lhs, rhs - 1e-9);
    }
  }
}

TEST(Minkowski, HalfCrossPlusHalfSquare) {
  const auto a = scale_translate(make_cross_polytope(2), 0.5, {0, 0});
  const auto b = scale_translate(make_cube(2), 0.5, {0, 0});
  const auto s = minkowski_sum(a, b);
  EXPECT_GE(std::sqrt(s.volume()), std::sqrt(a.volume()) + std::sqrt(b.volume()) - 1e-9);
}

TEST(ScaleTranslate, ScalingLaw) {
  const auto sq = make_cube(2);
  EXPECT_NEAR(scale_translate(sq, 2.0, {0, 0}).volume(), 4.0, 1e-12);
  const auto same = scale_translate(sq, 1.0, {0, 0});
  EXPECT_TRUE(equal_up_to_translation(same, sq, 1e-12).equal);
  const auto pt = scale_translate(sq, 0.0, {0.5, 0.5});
  EXPECT_EQ(pt.affine_dim(), 0);
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = oracle::random_hull(rng, 3, 12);
    const double t = rng.uniform(0.1, 3.0);
    EXPECT_NEAR(scale_translate(k, t, {1, -2, 0.5}).volume(), std::pow(t, 3) * k.volume(), 1e-9 * std::pow(t, 3) * k.volume());
  }
}

TEST(Translation, ShiftedSquare) {
  const auto a = make_cube(2);
  const auto b = make_box({2, 5}, {3, 6});
  const auto m = equal_up_to_translation(a, b, 1e-9);
  EXPECT_TRUE(m.equal);
  EXPECT_NEAR(m.shift[0], -2.0, 1e-12);
  EXPECT_NEAR(m.shift[1], -5.0, 1e-12);
}

TEST(Translation, SquareIsNotAPolygonOfEqualArea) {
  std::vector<Point> gon;
  const double r = std::sqrt(1.0 / (10 * std::sin(2 * M_PI / 20)));
  for (int i = 0; i < 20; ++i) gon.push_back({r * std::cos(2 * M_PI * i / 20), r * std::sin(2 * M_PI * i / 20)});
  VPolytope disk(gon);
  ASSERT_NEAR(disk.volume(), 1.0, 1e-9);
  EXPECT_FALSE(equal_up_to_translation(make_cube(2), disk, 1e-6).equal);
}

TEST(Gauge, KnownValues) {
  EXPECT_NEAR(minkowski_functional(make_box({-1, -1}, {1, 1}), {0.5, 0}), 0.5, 1e-12);
  EXPECT_NEAR(minkowski_functional(make_cross_polytope(2), {2, 0}), 2.0, 1e-12);
}

TEST(Gauge, MatchesBisectionAndIsHomogeneous) {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto k = oracle::random_hull(rng, 3, 15);
    Point c = k.vertex_centroid();
    for (auto& v : c) v = -v;
    k = scale_translate(k, 1.0, c);
    const Point x = uniform_in_ball(rng, 3);
    const double g = minkowski_functional(k, x);
    EXPECT_NEAR(g, oracle::gauge_by_bisection(k.vertices(), x), 1e-8 * std::max(g, 1.0));
    const double lam = rng.uniform(0.0, 4.0);
    Point y = x;
    for (auto& v : y) v *= lam;
    EXPECT_NEAR(minkowski_functional(k, y), lam * g, 1e-10 * std::max(1.0, lam * g));
    if (g < 1.0 - 1e-9) EXPECT_TRUE(k.contains(x));
    if (g > 1.0 + 1e-9) EXPECT_FALSE(k.contains(x));
  }
}

TEST(RoundTrip, VerticesFromHalfspacesReproduceVertices) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto k = oracle::random_hull(rng, 3, 14);
    const auto back = vertices_of(k.hrep());
    EXPECT_EQ(back.vertices().size(), k.vertices().size());
    const auto m = equal_up_to_translation(back, k, 1e-8);
    EXPECT_TRUE(m.equal);
    for (double z : m.shift) EXPECT_NEAR(z, 0.0, 1e-8);
  }
}

TEST(Fubini, SliceIntegralRecoversVolume) {
  Rng rng(12);
  const auto k = oracle::random_hull(rng, 3, 20);
  const auto base = project(k, IndexSet::of({3}, 3));
  QuadratureSpec spec;
  spec.method = QuadratureSpec::Method::grid;
  auto f = [&](const Point& y, double* out) {
    const auto s = slice(k.hrep(), {0, 0, y[0]}, IndexSet::of({1, 2}, 3));
    out[0] = s ? s->measure(2) : 0.0;
  };
  const auto q = integrate(base, 1, f, spec);
  EXPECT_NEAR(q.values[0] / k.volume(), 1.0, 1e-4);
}

TEST(Exact, RationalVolumesOfStandardBodies) {
  std::vector<std::vector<Rational>> cross;
  for (int i = 0; i < 3; ++i) {
    for (int sgn : {-1, 1}) {
      std::vector<Rational> v(3, Rational(0));
      v[i] = sgn;
      cross.push_back(v);
    }
  }
  EXPECT_EQ(exact_hull_volume(cross), rational(4, 3));
  std::vector<std::vector<Rational>> eq;
  for (auto [x, y] : {std::pair{-1, -1}, {1, -1}, {-1, 1}, {1, 1}}) eq.push_back({Rational(x), Rational(y), Rational(0)});
  eq.push_back({Rational(0), Rational(0), Rational(1)});
  eq.push_back({Rational(0), Rational(0), Rational(-1)});
  EXPECT_EQ(exact_hull_volume(eq), rational(8, 3));
}

TEST(Exact, LatticeSimplexMatchesDeterminant) {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<Rational>> v;
    for (int i = 0; i < 4; ++i) {
      std::vector<Rational> p;
      for (int c = 0; c < 3; ++c) p.push_back(rational(static_cast<long long>(rng.below(21)) - 10, 1 + rng.below(4)));
      v.push_back(p);
    }
    const auto det = oracle::simplex_volume(v);
    if (det == 0) continue;
    EXPECT_EQ(exact_hull_volume(v), det);
  }
}

TEST(Errors, DimensionMismatchIsInputError) {
  EXPECT_THROW(VPolytope({{0, 0}, {1, 0, 0}}), InputError);
  EXPECT_THROW(project(make_cube(3), IndexSet::of({1, 4}, 4)), InputError);
}
