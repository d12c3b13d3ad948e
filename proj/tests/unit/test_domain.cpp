#include "pcula/domain.hpp"
#include "pcula/errors.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace pcula;
using pcula::testing::vec;

namespace {

// Nearest point on the ellipse x^2 + (y/0.5)^2 = 1 by dense parametric
// sampling of the boundary.
Point ellipse_brute_force(const Point& x, long samples = 10'000'000) {
  double best = INFINITY, best_t = 0.0;
  for (long k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * double(k) / double(samples);
    const double dx = std::cos(t) - x(0), dy = 0.5 * std::sin(t) - x(1);
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) {
      best = d2;
      best_t = t;
    }
  }
  return vec({std::cos(best_t), 0.5 * std::sin(best_t)});
}

}  // namespace

TEST(Contains, BallInteriorAndExterior) {
  const auto b = ConvexDomain::ball(vec({0, 0}), 1.0);
  EXPECT_TRUE(b.contains(vec({0.5, 0})));
  EXPECT_FALSE(b.contains(vec({2, 0})));
}

TEST(Contains, EllipseBoundaryPoint) {
  EXPECT_TRUE(ConvexDomain::ellipsoid(vec({1.0, 0.5})).contains(vec({0, 0.5})));
}

TEST(Contains, ToleranceInflatesTheSet) {
  const auto b = ConvexDomain::ball(vec({0, 0}), 1.0);
  EXPECT_FALSE(b.contains(vec({1.05, 0})));
  EXPECT_TRUE(b.contains(vec({1.05, 0}), 0.1));
}

TEST(Contains, DimensionMismatchThrows) {
  const auto b = ConvexDomain::ball(vec({0, 0}), 1.0);
  EXPECT_THROW(b.contains(vec({1, 2, 3})), DimensionMismatch);
  EXPECT_THROW(b.project(vec({1})), DimensionMismatch);
}

TEST(Project, BallRadial) {
  const auto r = ConvexDomain::ball(vec({0, 0}), 1.0).project(vec({2, 0}));
  EXPECT_EQ(r.point, vec({1, 0}));
  EXPECT_DOUBLE_EQ(r.squared_distance, 1.0);
  EXPECT_TRUE(r.converged);
}

TEST(Project, BoxClamp) {
  const auto r = ConvexDomain::box(vec({-1, -1}), vec({1, 1})).project(vec({2, -3}));
  EXPECT_EQ(r.point, vec({1, -1}));
  EXPECT_DOUBLE_EQ(r.squared_distance, 5.0);
}

TEST(Project, HalfspaceClosedForm) {
  const auto h = ConvexDomain::halfspace(vec({0, 1}), 1.0);
  const auto r = h.project(vec({3, 4}));
  EXPECT_EQ(r.point, vec({3, 1}));
  EXPECT_DOUBLE_EQ(r.squared_distance, 9.0);
}

TEST(Project, EllipseMatchesBoundarySamplingOracle) {
  const auto e = ConvexDomain::ellipsoid(vec({1.0, 0.5}));
  const Point x = vec({1.2, 0.3});
  const auto r = e.project(x);
  const Point oracle = ellipse_brute_force(x);
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.point - oracle).norm(), 1e-5);
  EXPECT_LE((e.penalty_gradient(x) - (x - oracle)).norm(), 1e-5);
}

TEST(Project, EllipsoidOnAxisAndCentered) {
  const auto e = ConvexDomain::ellipsoid(vec({2.0, 1.0}), vec({1.0, 1.0}));
  const auto r = e.project(vec({1.0, 5.0}));
  EXPECT_NEAR(r.point(0), 1.0, 1e-12);
  EXPECT_NEAR(r.point(1), 2.0, 1e-12);
  EXPECT_NEAR(r.squared_distance, 9.0, 1e-10);
}

TEST(Project, IntersectionOfHalfspacesHitsTheCorner) {
  const auto d = ConvexDomain::intersection(
      {ConvexDomain::halfspace(vec({1, 0}), 0.0), ConvexDomain::halfspace(vec({0, 1}), 0.0)});
  const auto r = d.project(vec({1, 2}));
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.point.norm(), 1e-9);
}

TEST(Project, IntersectionIsMetricProjectionNotAlternation) {
  // Ball and halfspace: plain alternation from (2, 2) stops at a different point.
  const auto d = ConvexDomain::intersection(
      {ConvexDomain::ball(vec({0, 0}), 1.0), ConvexDomain::halfspace(vec({0, 1}), 0.0)});
  const auto r = d.project(vec({2, 0.5}));
  EXPECT_NEAR(r.point(0), 1.0, 1e-8);
  EXPECT_NEAR(r.point(1), 0.0, 1e-8);
}

TEST(SquaredDistance, Examples) {
  const auto b = ConvexDomain::ball(vec({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(b.squared_distance(vec({3, 4})), 16.0);
  EXPECT_EQ(b.squared_distance(vec({0.1, 0.2})), 0.0);
  EXPECT_DOUBLE_EQ(ConvexDomain::box(vec({0}), vec({1})).squared_distance(vec({-0.5})), 0.25);
}

TEST(PenaltyGradient, Examples) {
  const auto b = ConvexDomain::ball(vec({0, 0}), 1.0);
  EXPECT_EQ(b.penalty_gradient(vec({2, 0})), vec({1, 0}));
  EXPECT_EQ(b.penalty_gradient(vec({0.3, 0.3})), vec({0, 0}));
}

TEST(Construction, RejectsInvalidShapes) {
  EXPECT_THROW(ConvexDomain::ball(vec({0, 0}), 0.0), InvalidArgument);
  EXPECT_THROW(ConvexDomain::box(vec({0, 0}), vec({1, 0})), InvalidArgument);
  EXPECT_THROW(ConvexDomain::box(vec({0, 0}), vec({1})), InvalidArgument);
  EXPECT_THROW(ConvexDomain::halfspace(vec({1, 1}), 0.0), InvalidArgument);
  EXPECT_THROW(ConvexDomain::ellipsoid(vec({1, -1})), InvalidArgument);
  EXPECT_THROW(ConvexDomain::intersection({}), InvalidArgument);
  EXPECT_THROW(ConvexDomain::intersection({ConvexDomain::halfspace(vec({1, 0}), -1.0),
                                           ConvexDomain::halfspace(vec({-1, 0}), -1.0)}),
               InvalidArgument);
}

class DomainProperties : public ::testing::TestWithParam<int> {};

TEST_P(DomainProperties, ProjectionSuite) {
  const auto variant = pcula::testing::domain_variants()[std::size_t(GetParam())];
  const ConvexDomain& d = variant.domain;
  std::mt19937_64 rng(1234 + GetParam());
  for (int i = 0; i < 1000; ++i) {
    const Point x = pcula::testing::random_point(rng, 2, 3.0);
    const Point y = pcula::testing::random_point(rng, 2, 3.0);
    const auto px = d.project(x);
    const auto py = d.project(y);
    ASSERT_TRUE(px.converged) << variant.name;
    // membership and distance bookkeeping
    EXPECT_TRUE(d.contains(px.point, d.membership_tolerance())) << variant.name;
    EXPECT_NEAR(px.squared_distance, (x - px.point).squaredNorm(),
                1e-10 * std::max(1.0, px.squared_distance));
    // idempotence
    EXPECT_LE((d.project(px.point).point - px.point).norm(), 1e-10) << variant.name;
    // non-expansiveness
    EXPECT_LE((px.point - py.point).norm(), (x - y).norm() + 1e-10) << variant.name;
    // 1-Lipschitz penalty gradient
    EXPECT_LE((d.penalty_gradient(x) - d.penalty_gradient(y)).norm(), (x - y).norm() + 1e-10);
    // variational inequality
    const Point z = pcula::testing::random_member(rng, d);
    EXPECT_LE((x - px.point).dot(z - px.point), 1e-9) << variant.name;
  }
}

TEST_P(DomainProperties, MembersAreFixedPoints) {
  const auto variant = pcula::testing::domain_variants()[std::size_t(GetParam())];
  std::mt19937_64 rng(99 + GetParam());
  for (int i = 0; i < 200; ++i) {
    const Point z = pcula::testing::random_member(rng, variant.domain);
    if (!variant.domain.contains(z)) continue;
    const auto r = variant.domain.project(z);
    EXPECT_EQ(r.point, z);
    EXPECT_EQ(r.squared_distance, 0.0);
    EXPECT_EQ(variant.domain.penalty_gradient(z), Point::Zero(2));
  }
}

TEST_P(DomainProperties, PenaltyGradientMatchesFiniteDifferences) {
  const auto variant = pcula::testing::domain_variants()[std::size_t(GetParam())];
  const ConvexDomain& d = variant.domain;
  std::mt19937_64 rng(7 + GetParam());
  const double step = 1e-6;
  int checked = 0;
  while (checked < 200) {
    const Point x = pcula::testing::random_point(rng, 2, 3.0);
    // skip a shell around the boundary and box corners/kinks
    const double dist = std::sqrt(d.squared_distance(x));
    if (dist < 1e-4) {
      if (!d.contains(x)) continue;
    }
    bool near_boundary = false;
    for (int k = 0; k < 8 && !near_boundary; ++k) {
      const double ang = k * std::numbers::pi / 4;
      const Point probe = x + 1e-4 * vec({std::cos(ang), std::sin(ang)});
      near_boundary = d.contains(probe) != d.contains(x);
    }
    if (near_boundary) continue;
    Point fd(2);
    for (int k = 0; k < 2; ++k) {
      Point e = Point::Zero(2);
      e(k) = step;
      fd(k) = (0.5 * d.squared_distance(x + e) - 0.5 * d.squared_distance(x - e)) / (2 * step);
    }
    const Point g = d.penalty_gradient(x);
    EXPECT_LE((fd - g).norm(), 1e-5 * std::max(1.0, g.norm())) << variant.name;
    ++checked;
  }
}

INSTANTIATE_TEST_SUITE_P(Variants, DomainProperties, ::testing::Range(0, 5),
                         [](const auto& info) {
                           return pcula::testing::domain_variants()[std::size_t(info.param)].name;
                         });
