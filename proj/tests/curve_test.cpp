#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eqflow/curve.hpp"
#include "eqflow/scenarios.hpp"

using namespace eqflow;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed loop whose node 0 sits at the vertex of y = x^2 with spacing h in x; the
// parabola runs for `arm` nodes each way and a wide arc closes it. Only the local
// stencil at node 0 matters; the loop is not antipodally symmetric.
DiscreteCurve parabola_loop(double h, int arm) {
  std::vector<PlanarPoint> nodes;
  for (int j = 0; j <= arm; ++j) nodes.push_back({j * h, j * h * j * h});
  const double top = arm * h * arm * h;
  const int arc = 2 * arm;  // keeps the total even
  for (int j = 1; j < arc; ++j) {
    const double u = kPi * j / arc;
    nodes.push_back({arm * h * std::cos(u), top + arm * h * std::sin(u)});
  }
  for (int j = -arm; j < 0; ++j) nodes.push_back({j * h, j * h * j * h});
  return DiscreteCurve(std::move(nodes), Symmetry::FigureEight);
}

std::vector<PlanarPoint> clustered_circle(std::size_t n) {
  std::vector<PlanarPoint> nodes(n);
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n / 2);
    const double u = kPi * (s + 0.12 * std::sin(2.0 * kPi * s));
    nodes[i] = {std::cos(u), std::sin(u)};
    nodes[i + n / 2] = -nodes[i];
  }
  return nodes;
}

double max_circle_curvature_error(std::size_t n) {
  const auto c = circle(1.0, n);
  const auto frames = compute_frames(c);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    err = std::max(err, norm(frames[i].curvature_vector - PlanarPoint{-std::cos(u), -std::sin(u)}));
  }
  return err;
}

}  // namespace

TEST(DiscreteCurve, RejectsTooFewNodes) {
  std::vector<PlanarPoint> nodes(8);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = {double(i), 0.0};
  try {
    DiscreteCurve c(nodes, Symmetry::OpenClamped);
    FAIL() << "accepted 8 nodes";
  } catch (const CurveError& e) {
    EXPECT_EQ(e.kind(), CurveErrorKind::InvalidSize);
  }
}

TEST(DiscreteCurve, RejectsOddClosedCurve) {
  std::vector<PlanarPoint> nodes(17);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = {std::cos(2 * kPi * i / 17.0), std::sin(2 * kPi * i / 17.0)};
  }
  EXPECT_THROW(DiscreteCurve(nodes, Symmetry::AntipodalClosed), CurveError);
  EXPECT_NO_THROW(DiscreteCurve(nodes, Symmetry::OpenClamped));
}

TEST(DiscreteCurve, RejectsNonFiniteAndRepeatedNodes) {
  const auto c16 = circle(1.0, 16);
  const auto nodes = c16.nodes();
  std::vector<PlanarPoint> bad(nodes.begin(), nodes.end());
  bad[3].x = std::nan("");
  try {
    DiscreteCurve c(bad, Symmetry::AntipodalClosed);
    FAIL();
  } catch (const CurveError& e) {
    EXPECT_EQ(e.kind(), CurveErrorKind::NonFinite);
    EXPECT_EQ(e.node(), 3u);
  }
  std::vector<PlanarPoint> dup(nodes.begin(), nodes.end());
  dup[5] = dup[4];
  try {
    DiscreteCurve c(dup, Symmetry::AntipodalClosed);
    FAIL();
  } catch (const CurveError& e) {
    EXPECT_EQ(e.kind(), CurveErrorKind::DegenerateSpacing);
    EXPECT_EQ(e.node(), 4u);
  }
}

TEST(DiscreteCurve, PartnersAndDiameter) {
  const auto w = whitney(64);
  EXPECT_EQ(w.partner(0), 0u);
  EXPECT_EQ(w.partner(5), 59u);
  EXPECT_EQ(w.partner(32), 32u);
  const auto c = circle(2.0, 32);
  EXPECT_EQ(c.partner(3), 19u);
  EXPECT_DOUBLE_EQ(c.diameter(), 4.0);
  EXPECT_EQ(c.symmetry_defect(), 0.0);
}

TEST(Frames, UnitCircleCurvaturePointsInward) {
  const auto c = circle(1.0, 256);
  const auto frames = compute_frames(c);
  EXPECT_NEAR(frames[0].curvature_vector.x, -1.0, 1e-3);
  EXPECT_NEAR(frames[0].curvature_vector.y, 0.0, 1e-12);
  for (const auto& f : frames) {
    EXPECT_NEAR(norm(f.tangent), 1.0, 1e-12);
    EXPECT_NEAR(norm(f.normal), 1.0, 1e-12);
    EXPECT_NEAR(dot(f.curvature_vector, f.tangent), 0.0, 1e-10 * norm(f.curvature_vector));
  }
}

TEST(Frames, RegularPolygonCurvatureIsExact) {
  // equal chords on a circle: the stencil gives exactly 1/R up to rounding
  const auto c = circle(3.0, 64);
  for (const auto& f : compute_frames(c)) EXPECT_NEAR(norm(f.curvature_vector), 1.0 / 3.0, 1e-13);
}

TEST(Frames, StraightPolylineHasNoCurvature) {
  const auto line = straight_line(0.7, 2.0, 32);
  const auto frames = compute_frames(line);
  for (std::size_t i = 1; i + 1 < frames.size(); ++i) EXPECT_LT(norm(frames[i].curvature_vector), 1e-12);
}

TEST(Frames, ParabolaVertexCurvatureConverges) {
  double prev_err = 1.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto c = parabola_loop(h, static_cast<int>(std::lround(0.1 / h)));
    const auto k = compute_frames(c)[0].curvature_vector;
    EXPECT_NEAR(k.x, 0.0, 1e-12);
    const double err = std::abs(k.y - 2.0);
    EXPECT_LT(err, 2.0 * h * h + 1e-12);  // oracle: 2 / (1 + h^2)
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
}

TEST(Frames, CircleCurvatureConvergesAtSecondOrder) {
  // the regular polygon is exact in magnitude, so perturb the sampling to see the order
  auto measure = [](std::size_t n) {
    const DiscreteCurve c(clustered_circle(n), Symmetry::AntipodalClosed);
    const auto frames = compute_frames(c);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, norm(frames[i].curvature_vector + c[i]));
    return err;
  };
  const double ratio = measure(256) / measure(512);
  EXPECT_GE(ratio, 3.5);
  EXPECT_LE(ratio, 4.5);
  EXPECT_LT(max_circle_curvature_error(128), 1e-12);
}

TEST(Frames, DegenerateSpacingNamesTheSegment) {
  const auto c32 = circle(1.0, 32);
  const auto src = c32.nodes();
  std::vector<PlanarPoint> nodes(src.begin(), src.end());
  nodes[7] = nodes[6] + PlanarPoint{1e-16, 0.0};
  const DiscreteCurve c(nodes, Symmetry::AntipodalClosed);
  try {
    compute_frames(c);
    FAIL();
  } catch (const CurveError& e) {
    EXPECT_EQ(e.kind(), CurveErrorKind::DegenerateSpacing);
    EXPECT_EQ(e.node(), 6u);
  }
}

TEST(SingularTerm, UnitCircleGivesPosition) {
  const auto c = circle(1.0, 128);
  const auto frames = compute_frames(c);
  for (std::size_t i : {0u, 17u, 90u}) {
    const auto s = singular_term(c, frames, i, 2, 0.05);
    EXPECT_NEAR(s.x, c[i].x, 1e-12);
    EXPECT_NEAR(s.y, c[i].y, 1e-12);
  }
}

TEST(SingularTerm, ParabolaVertexGivesHalfCurvature) {
  const double h = 0.001;
  const auto c = parabola_loop(h, 100);
  const auto frames = compute_frames(c);
  const auto s = singular_term(c, frames, 0, 2, 0.01);
  EXPECT_NEAR(s.x, 0.0, 1e-12);
  EXPECT_NEAR(s.y, 1.0, 1e-5);
}

TEST(SingularTerm, VanishesAlongLineThroughOrigin) {
  std::vector<PlanarPoint> nodes;
  for (int j = 1; j <= 20; ++j) nodes.push_back({0.1 * j, 0.1 * j});
  const DiscreteCurve ray(nodes, Symmetry::OpenClamped);
  const auto frames = compute_frames(ray);
  const auto s = singular_term(ray, frames, 9, 3, 0.01);  // node at (1, 1)
  EXPECT_NEAR(s.x, 0.0, 1e-14);
  EXPECT_NEAR(s.y, 0.0, 1e-14);
}

TEST(SingularTerm, MatchesRawFormulaOutsideBlend) {
  const auto w = whitney(256);
  const auto frames = compute_frames(w);
  const double blend = 2.0 * w.mean_spacing();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r2 = norm2(w[i]);
    if (std::sqrt(r2) < blend) continue;
    const auto s = singular_term(w, frames, i, 4, blend);
    const auto raw = frames[i].normal * (3.0 * dot(w[i], frames[i].normal) / r2);
    EXPECT_EQ(s.x, raw.x);
    EXPECT_EQ(s.y, raw.y);
  }
}

TEST(SingularTerm, OddUnderAntipodalMap) {
  const auto w = whitney(128);
  const auto frames = compute_frames(w);
  const double blend = 2.0 * w.mean_spacing();
  for (std::size_t i = 1; i < 64; ++i) {
    const auto a = singular_term(w, frames, i, 2, blend);
    const auto b = singular_term(w, frames, 128 - i, 2, blend);
    EXPECT_EQ(a.x, -b.x);
    EXPECT_EQ(a.y, -b.y);
  }
}

TEST(SingularTerm, UnpinnedOriginIsStructuralError) {
  std::vector<PlanarPoint> nodes;
  for (int j = -8; j <= 8; ++j) nodes.push_back({0.1 * j, 0.0});
  const DiscreteCurve line(nodes, Symmetry::OpenClamped);
  ASSERT_EQ(norm(line[8]), 0.0);
  const auto frames = compute_frames(line);
  try {
    singular_term(line, frames, 8, 2, 0.1);
    FAIL();
  } catch (const CurveError& e) {
    EXPECT_EQ(e.kind(), CurveErrorKind::SymmetryBroken);
  }
}

TEST(Resample, ClusteredCircleBecomesEquallySpaced) {
  const DiscreteCurve c(clustered_circle(200), Symmetry::AntipodalClosed);
  const auto r = resample_arclength(c, 64);
  ASSERT_EQ(r.size(), 64u);
  const double h0 = r.segment_length(0);
  for (std::size_t i = 0; i < r.segment_count(); ++i) EXPECT_NEAR(r.segment_length(i), h0, 1e-10 * h0);
}

TEST(Resample, FigureEightStaysExactlySymmetric) {
  const auto w = whitney(256);
  const auto r = resample_arclength(w, 300);
  EXPECT_EQ(r.symmetry_defect(), 0.0);
  EXPECT_EQ(r[0].x, 0.0);
  EXPECT_EQ(r[150].y, 0.0);
  for (std::size_t i = 1; i < 150; ++i) {
    EXPECT_EQ(r[300 - i].x, -r[i].x);
    EXPECT_EQ(r[300 - i].y, -r[i].y);
  }
}

TEST(Resample, PreservesLengthWhenRefining) {
  const auto w = whitney(512);
  const auto r = resample_arclength(w, 1024);
  EXPECT_NEAR(r.length() / w.length(), 1.0, 5e-3);
}

TEST(Resample, IsIdempotent) {
  const DiscreteCurve c(clustered_circle(128), Symmetry::AntipodalClosed);
  const auto once = resample_arclength(c, 96);
  const auto twice = resample_arclength(once, 96);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_LT(norm(once[i] - twice[i]), 1e-12);
  const auto w = whitney(128);
  const auto w2 = resample_arclength(w, 128);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_LT(norm(w[i] - w2[i]), 1e-12);
}

TEST(Resample, RejectsOddTarget) { EXPECT_THROW(resample_arclength(whitney(64), 63), CurveError); }

TEST(EnforceAntipodal, LeavesSymmetricCurveAlone) {
  const auto w = whitney(128);
  const auto e = enforce_antipodal(w);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(e[i].x, w[i].x);
    EXPECT_EQ(e[i].y, w[i].y);
  }
}

TEST(EnforceAntipodal, RepairsSingleNodeAndOrigin) {
  const auto w = whitney(128);
  std::vector<PlanarPoint> nodes(w.nodes().begin(), w.nodes().end());
  nodes[10] += PlanarPoint{1e-3, -2e-3};
  nodes[0] = {1e-9, 0.0};
  const auto e = enforce_antipodal(w.with_nodes(nodes));
  EXPECT_EQ(e[0].x, 0.0);
  EXPECT_EQ(e[0].y, 0.0);
  EXPECT_EQ(e[118].x, -e[10].x);
  EXPECT_EQ(e[118].y, -e[10].y);
  EXPECT_EQ(e.symmetry_defect(), 0.0);
  const auto again = enforce_antipodal(e);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(norm(again[i] - e[i]), 0.0);
}

TEST(EnforceAntipodal, RejectsOpenCurves) {
  EXPECT_THROW(enforce_antipodal(straight_line(0.0, 1.0, 16)), CurveError);
}

TEST(SelfIntersections, WhitneyOnlyCrossesAtOrigin) {
  EXPECT_TRUE(self_intersections(whitney(256)).empty());
}

TEST(SelfIntersections, FindsBowtieCrossing) {
  // (0,0) -> (1,1) -> (1,0) -> (0,1) -> back, crossing at (0.5, 0.5) between nodes
  const PlanarPoint corners[] = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  std::vector<PlanarPoint> nodes;
  for (int leg = 0; leg < 4; ++leg) {
    const PlanarPoint a = corners[leg], b = corners[(leg + 1) % 4];
    for (int j = 0; j < 7; ++j) nodes.push_back(a + (b - a) * (j / 7.0));
  }
  const DiscreteCurve c(nodes, Symmetry::AntipodalClosed);
  const auto crossings = self_intersections(c);
  ASSERT_EQ(crossings.size(), 1u);
  EXPECT_NEAR(crossings.front().point.x, 0.5, 1e-12);
  EXPECT_NEAR(crossings.front().point.y, 0.5, 1e-12);
}
