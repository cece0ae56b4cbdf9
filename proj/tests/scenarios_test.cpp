#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eqflow/observables.hpp"
#include "eqflow/scenarios.hpp"

using namespace eqflow;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Whitney, ClosedFormPoints) {
  EXPECT_NEAR(whitney_point(kPi / 2).x, 1.0, 1e-15);
  EXPECT_NEAR(whitney_point(kPi / 2).y, 0.0, 1e-15);
  EXPECT_EQ(whitney_point(0.0).x, 0.0);
  EXPECT_EQ(whitney_point(0.0).y, 0.0);
  // u = pi/4: (s, s c) / (1 + c^2) with s = c = 1/sqrt 2
  EXPECT_NEAR(whitney_point(kPi / 4).x, std::sqrt(2.0) / 3.0, 1e-15);
  EXPECT_NEAR(whitney_point(kPi / 4).y, 1.0 / 3.0, 1e-15);
}

TEST(Whitney, DiscreteCurveLayout) {
  const auto w = whitney(256);
  EXPECT_EQ(w.symmetry(), Symmetry::FigureEight);
  EXPECT_EQ(w.size(), 256u);
  EXPECT_EQ(norm(w[0]), 0.0);
  EXPECT_EQ(norm(w[128]), 0.0);
  EXPECT_EQ(w.symmetry_defect(), 0.0);
  EXPECT_NEAR(w.max_radius(), 1.0, 1e-4);
  // equal chords
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w.segment_length(i), w.mean_spacing(), 1e-9);
}

TEST(Whitney, RejectsBadNodeCounts) {
  EXPECT_THROW(whitney(255), CurveError);
  EXPECT_THROW(whitney(8), CurveError);
}

TEST(Circle, NodesOnTheCircle) {
  const auto c = circle(2.5, 64);
  EXPECT_EQ(c.symmetry(), Symmetry::AntipodalClosed);
  EXPECT_NEAR(c[0].x, 2.5, 1e-15);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(norm(c[i]), 2.5, 1e-14);
  EXPECT_EQ(c.symmetry_defect(), 0.0);
}

TEST(Barrier, HalfPlaneBoundaryIsStraight) {
  // alpha = pi gives 1/sin(u) (cos u, sin u), the line y = 1
  for (double u : {0.1, 0.7, 1.5, 2.9}) EXPECT_NEAR(barrier_point(kPi, u).y, 1.0, 1e-12);
  const auto pair = barrier_alpha(kPi, 200, 0.2);
  for (std::size_t i = 0; i < pair.arc.size(); ++i) {
    EXPECT_NEAR(pair.arc[i].y, 1.0, 1e-12);
    EXPECT_NEAR(pair.antipodal[i].y, -1.0, 1e-12);
  }
}

TEST(Barrier, UnitRadiusOnTheBisector) {
  for (double alpha : {0.5 * kPi, 0.75 * kPi, 0.9 * kPi}) {
    const auto p = barrier_point(alpha, 0.5 * alpha);
    EXPECT_NEAR(p.x, std::cos(0.5 * alpha), 1e-14);
    EXPECT_NEAR(p.y, std::sin(0.5 * alpha), 1e-14);
  }
}

TEST(Barrier, RadiusGrowsTowardTheAsymptotes) {
  const double alpha = 0.75 * kPi;
  double prev = norm(barrier_point(alpha, 0.5 * alpha));
  for (int k = 1; k <= 20; ++k) {
    const double r = norm(barrier_point(alpha, 0.5 * alpha + 0.5 * alpha * k / 21.0));
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Barrier, ArcStaysInsideTheSector) {
  const double alpha = 0.75 * kPi;
  const auto pair = barrier_alpha(alpha, 128, 0.05);
  for (std::size_t i = 0; i < pair.arc.size(); ++i) {
    const double u = std::atan2(pair.arc[i].y, pair.arc[i].x);
    EXPECT_GE(u, 0.05 - 1e-9);
    EXPECT_LE(u, alpha - 0.05 + 1e-9);
    EXPECT_EQ(pair.antipodal[i].x, -pair.arc[i].x);
  }
  EXPECT_THROW(barrier_alpha(alpha, 128, 0.0), CurveError);
  EXPECT_THROW(barrier_alpha(1.1 * kPi, 128, 0.1), CurveError);
}

TEST(ConeEight, RightAngleIsScaledWhitney) {
  const auto c = cone_eight(kPi / 2, 1.0, 512);
  EXPECT_NEAR(c.squeeze, 1.0, 1e-15);
  EXPECT_NEAR(enclosed_area(c.curve), 1.0, 1e-12);
  EXPECT_NEAR(cone_width(c.curve), kPi / 2, 0.02);
  // the same shape as Whitney up to scale
  const double mu = std::sqrt(1.0 / enclosed_area(whitney(512)));
  EXPECT_NEAR(c.scale, mu, 1e-3 * mu);
}

TEST(ConeEight, AreaTargetSetsTheScale) {
  const auto a = cone_eight(0.75 * kPi, 1.0, 256);
  const auto b = cone_eight(0.75 * kPi, 2.0, 256);
  EXPECT_NEAR(b.scale / a.scale, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(enclosed_area(b.curve), 2.0, 1e-12);
}

TEST(ConeEight, OpeningFollowsAlpha) {
  for (double alpha : {0.4 * kPi, 0.75 * kPi}) {
    const auto c = cone_eight(alpha, 1.0, 1024);
    EXPECT_NEAR(c.squeeze, std::tan(alpha / 2), 1e-14);
    EXPECT_NEAR(cone_width(c.curve), alpha, 0.02);
  }
  EXPECT_NEAR(cone_eight(0.75 * kPi, 1.0, 1024, 0.1).squeeze, std::tan(0.375 * kPi - 0.1), 1e-14);
}

TEST(ConeEight, AlreadySymmetric) {
  const auto c = cone_eight(0.75 * kPi, 3.0, 256).curve;
  EXPECT_EQ(c.symmetry_defect(), 0.0);
  const auto again = enforce_antipodal(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(again[i].x, c[i].x);
    EXPECT_EQ(again[i].y, c[i].y);
  }
}

TEST(ConeEight, InfeasibleOpeningsRejected) {
  EXPECT_THROW(cone_eight(kPi, 1.0, 256), CurveError);
  EXPECT_THROW(cone_eight(0.5 * kPi, 1.0, 256, 0.8), CurveError);
  EXPECT_THROW(cone_eight(0.5 * kPi, -1.0, 256), CurveError);
  EXPECT_THROW(cone_eight(0.5 * kPi, 1.0, 32), CurveError);
}

TEST(Perturb, ZeroAmplitudeIsIdentity) {
  const auto w = whitney(128);
  const auto p = perturb(w, 0.0, 3);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(norm(p[i] - w[i]), 0.0);
}

TEST(Perturb, StaysSymmetricAndPinned) {
  const auto p = perturb(whitney(256), 0.02, 5);
  EXPECT_EQ(p.symmetry_defect(), 0.0);
  EXPECT_EQ(norm(p[0]), 0.0);
  EXPECT_EQ(norm(p[128]), 0.0);
  EXPECT_TRUE(self_intersections(p).empty());
}

TEST(Perturb, BoundedCircleCrossings) {
  const auto p = perturb(whitney(512), 0.02, 3);
  for (double r : standard_radius_grid(p)) EXPECT_LE(circle_intersections(p, r), 6) << "r=" << r;
}

TEST(Perturb, LargeAmplitudeRejected) {
  try {
    perturb(whitney(128), 0.5, 8);
    FAIL() << "expected rejection";
  } catch (const CurveError& e) {
    EXPECT_TRUE(e.node().has_value());
    EXPECT_NE(std::string(e.what()).find("self-intersection"), std::string::npos);
  }
  EXPECT_THROW(perturb(circle(1.0, 64), 0.01, 2), CurveError);
}

TEST(RadiusGrid, SixteenMidpoints) {
  const auto grid = standard_radius_grid(circle(2.0, 32));
  ASSERT_EQ(grid.size(), 16u);
  EXPECT_NEAR(grid.front(), 2.0 / 32.0, 1e-15);
  EXPECT_NEAR(grid.back(), 2.0 * 31.0 / 32.0, 1e-15);
}

TEST(Generators, FigureEightsCrossOnlyAtTheOrigin) {
  EXPECT_TRUE(self_intersections(whitney(512)).empty());
  EXPECT_TRUE(self_intersections(cone_eight(0.75 * kPi, 1.0, 512).curve).empty());
  EXPECT_TRUE(self_intersections(cone_eight(0.3 * kPi, 1.0, 512).curve).empty());
}
