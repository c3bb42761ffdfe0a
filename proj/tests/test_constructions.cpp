#include "ngd/constructions.hpp"

#include <gtest/gtest.h>

using namespace ngd;

namespace {

FiniteMetricSpace two_points() {
  FiniteMetricSpace m{{"x", "y"}, RationalMatrix::Zero(2, 2)};
  m.dist(0, 1) = m.dist(1, 0) = 1;
  return m;
}

GroupAction z2_swap() {
  return GroupAction{{"e", "s"}, {{0, 1}, {1, 0}}, {{0, 1}, {1, 0}}};
}

}  // namespace

TEST(PairGroupoid, TwoPointSpace) {
  auto pg = pair_groupoid(two_points());
  EXPECT_EQ(pg.groupoid.size(), 4u);
  EXPECT_EQ(pg.norm[pair_arrow(2, 0, 1)], 1);
  EXPECT_TRUE(validate_groupoid(pg.groupoid).passed());
  EXPECT_TRUE(check_norm(pg.groupoid, pg.norm).passed());
  EXPECT_TRUE(check_separability(pg.groupoid, pg.norm));
}

TEST(PairGroupoid, OnePointSpace) {
  FiniteMetricSpace m{{"o"}, RationalMatrix::Zero(1, 1)};
  auto pg = pair_groupoid(m);
  ASSERT_EQ(pg.groupoid.size(), 1u);
  EXPECT_TRUE(pg.groupoid.is_identity(0));
  EXPECT_EQ(pg.norm[0], 0);
}

TEST(PairGroupoid, LineMetricRecoveredByObjectDistance) {
  auto m = line_metric({0, 1, 2});
  auto pg = pair_groupoid(m);
  auto dob = object_distance(pg.groupoid, pg.norm);
  // objects() lists identities in id order, i.e. in point order.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(*dob[i][j], m.dist(i, j));
}

TEST(PairGroupoid, RandomMetricsAlwaysSeparable) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    auto m = random_metric_space(rng, 2 + t % 6);
    ASSERT_TRUE(check_metric(m).passed());
    auto pg = pair_groupoid(m);
    EXPECT_TRUE(check_separability(pg.groupoid, pg.norm));
  }
}

TEST(DoubleGroupoid, NormIsObjectDistanceOfDifference) {
  auto m = line_metric({0, Rational(3, 2), 4});
  auto pg = pair_groupoid(m);
  auto dbl = double_groupoid(pg.groupoid, pg.norm);
  const auto& g = pg.groupoid;
  // d~((x,z),(y,z)) = d(x,y)
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        auto it = std::find(dbl.pairs.begin(), dbl.pairs.end(),
                            std::make_pair(pair_arrow(3, i, k), pair_arrow(3, j, k)));
        ASSERT_NE(it, dbl.pairs.end());
        EXPECT_EQ(dbl.normed.norm[static_cast<std::size_t>(it - dbl.pairs.begin())],
                  m.dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
  for (std::size_t a = 0; a < dbl.pairs.size(); ++a)
    if (dbl.pairs[a].first == dbl.pairs[a].second) EXPECT_EQ(dbl.normed.norm[a], 0);
  EXPECT_TRUE(validate_groupoid(dbl.normed.groupoid).passed());
  EXPECT_TRUE(check_dif_isometry(g, pg.norm, dbl).passed());
}

TEST(DoubleGroupoid, NormAxiomsOnRandomSpaces) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    auto pg = pair_groupoid(random_metric_space(rng, 2 + t % 4));
    auto dbl = double_groupoid(pg.groupoid, pg.norm);
    auto r = check_norm(dbl.normed.groupoid, dbl.normed.norm);
    EXPECT_TRUE(r.passed()) << r.summary();
  }
}

TEST(FiberDistances, PairGroupoidFormulaAndSingleton) {
  auto m = line_metric({0, 2, 5});
  auto pg = pair_groupoid(m);
  auto fam = fiber_distances(pg.groupoid, pg.norm);
  // d_y((x,y),(z,y)) = d(x,z)
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t z = 0; z < 3; ++z)
        EXPECT_EQ(fam.distance(pg.groupoid, pair_arrow(3, x, y), pair_arrow(3, z, y)),
                  m.dist(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z)));
  EXPECT_TRUE(check_right_invariance(pg.groupoid, fam).passed());

  FiniteMetricSpace one{{"o"}, RationalMatrix::Zero(1, 1)};
  auto p1 = pair_groupoid(one);
  auto f1 = fiber_distances(p1.groupoid, p1.norm);
  ASSERT_EQ(f1.fibers.size(), 1u);
  EXPECT_EQ(f1.fibers[0].dist(0, 0), 0);
}

TEST(FiberDistances, RoundTripsAreExact) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto pg = pair_groupoid(random_metric_space(rng, 2 + t % 5));
    auto fam = fiber_distances(pg.groupoid, pg.norm);
    auto d = norm_from_fiber_distances(pg.groupoid, fam);
    EXPECT_EQ(d, pg.norm);
    auto fam2 = fiber_distances(pg.groupoid, d);
    ASSERT_EQ(fam2.fibers.size(), fam.fibers.size());
    for (std::size_t i = 0; i < fam.fibers.size(); ++i)
      EXPECT_TRUE(exactly_equal(fam2.fibers[i].dist, fam.fibers[i].dist));
  }
}

TEST(FiberDistances, IdentityOnlyGroupoidGivesZeroNorm) {
  auto g = FiniteGroupoid({"a", "b"}, {{0, 0, 0}, {1, 1, 1}}, {0, 1});
  Norm zero(2, Rational(0));
  auto fam = fiber_distances(g, zero);
  EXPECT_EQ(norm_from_fiber_distances(g, fam), zero);
}

TEST(FiberDistances, PlantedInvarianceViolationRejected) {
  auto pg = pair_groupoid(line_metric({0, 1, 3}));
  auto fam = fiber_distances(pg.groupoid, pg.norm);
  // Bend one distance in the fiber over the first point only.
  auto& f = fam.fibers[0];
  f.dist(1, 2) = f.dist(2, 1) = 7;
  EXPECT_FALSE(check_right_invariance(pg.groupoid, fam).passed());
  EXPECT_THROW(norm_from_fiber_distances(pg.groupoid, fam), PreconditionError);
}

TEST(ActionGroupoid, SwapOnTwoPoints) {
  auto ag = action_groupoid(z2_swap(), two_points());
  ASSERT_TRUE(validate_groupoid(ag.normed.groupoid).passed());
  // arrow (x, swap) has id 0 * 2 + 1
  EXPECT_EQ(ag.normed.norm[1], 1);
  EXPECT_TRUE(check_norm(ag.normed.groupoid, ag.normed.norm).passed());
  EXPECT_TRUE(is_free(z2_swap()));
}

TEST(ActionGroupoid, TrivialGroupGivesIdentities) {
  GroupAction trivial{{"e"}, {{0}}, {{0, 1}}};
  auto ag = action_groupoid(trivial, two_points());
  for (ArrowId a = 0; a < ag.normed.groupoid.size(); ++a) {
    EXPECT_TRUE(ag.normed.groupoid.is_identity(a));
    EXPECT_EQ(ag.normed.norm[a], 0);
  }
}

TEST(ActionGroupoid, SingletonBaseIsAGroupWithRightInvariantDistance) {
  // Z/3 acting on one point; the norm recipe gives d = 0 everywhere, so the
  // identity clause fails: a group needs its own right-invariant distance,
  // supplied here through the fiber distances of the action groupoid.
  GroupAction z3{{"0", "1", "2"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, {{0}, {0}, {0}}};
  ASSERT_TRUE(check_group_action(z3).passed());
  EXPECT_FALSE(is_free(z3) && z3.points() > 1);
  FiniteMetricSpace one{{"o"}, RationalMatrix::Zero(1, 1)};
  auto ag = action_groupoid(z3, one);
  const auto& g = ag.normed.groupoid;
  ASSERT_TRUE(validate_groupoid(g).passed());
  EXPECT_EQ(g.objects().size(), 1u);
  EXPECT_TRUE(check_norm(g, ag.normed.norm).has_violation("zero exactly on identities"));
  // Right-invariant distance on Z/3: d(a, b) = 1 for a != b.
  Norm d{0, 1, 1};
  EXPECT_TRUE(check_norm(g, d).passed());
  EXPECT_TRUE(check_right_invariance(g, fiber_distances(g, d)).passed());
}

TEST(ActionGroupoid, NonFreeActionFailsIdentityClause) {
  // Z/2 acting on three points, fixing the middle one.
  GroupAction a{{"e", "s"}, {{0, 1}, {1, 0}}, {{0, 1, 2}, {2, 1, 0}}};
  ASSERT_TRUE(check_group_action(a).passed());
  EXPECT_FALSE(is_free(a));
  auto ag = action_groupoid(a, line_metric({0, 1, 2}));
  auto r = check_norm(ag.normed.groupoid, ag.normed.norm);
  EXPECT_TRUE(r.has_violation("zero exactly on identities"));
  // The stabilizer of the middle point makes the norm non-separating there
  // but separability of objects is unaffected: only loops have norm zero.
  EXPECT_TRUE(check_separability(ag.normed.groupoid, ag.normed.norm));
}

TEST(DoubleAction, IsometricAndAssociative) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 5; ++t) {
    auto pg = pair_groupoid(random_metric_space(rng, 2 + t % 2));
    auto da = double_action_groupoid(pg.groupoid, pg.norm);
    EXPECT_TRUE(da.isometry.passed());
    auto r = validate_groupoid(da.groupoid);
    EXPECT_TRUE(r.passed()) << r.summary();
  }
}

TEST(DoubleAction, IdentityArrowActsTrivially) {
  auto pg = pair_groupoid(line_metric({0, 1}));
  auto da = double_action_groupoid(pg.groupoid, pg.norm);
  const auto& g = pg.groupoid;
  for (std::size_t i = 0; i < da.labels.size(); ++i) {
    const auto& l = da.labels[i];
    if (g.is_identity(l.u)) EXPECT_TRUE(da.groupoid.is_identity(i));
  }
}
