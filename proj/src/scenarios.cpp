#include "eqflow/scenarios.hpp"

#include <cmath>
#include <numbers>

#include "eqflow/observables.hpp"

namespace eqflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

PlanarPoint whitney_point(double u) {
  const double s = std::sin(u);
  const double c = std::cos(u);
  const double d = 1.0 + c * c;
  return {s / d, s * c / d};
}

DiscreteCurve whitney(std::size_t n_nodes) {
  if (n_nodes % 2 != 0) throw CurveError(CurveErrorKind::InvalidSize, "whitney: node count must be even");
  if (n_nodes < 64) throw CurveError(CurveErrorKind::InvalidSize, "whitney: node count must be >= 64");
  std::vector<PlanarPoint> nodes(n_nodes);
  const std::size_t half = n_nodes / 2;
  for (std::size_t i = 1; i < half; ++i) {
    nodes[i] = whitney_point(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_nodes));
    nodes[n_nodes - i] = -nodes[i];
  }
  return resample_arclength(DiscreteCurve(std::move(nodes), Symmetry::FigureEight), n_nodes);
}

DiscreteCurve circle(double radius, std::size_t n_nodes) {
  if (!(radius > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "circle: radius must be positive");
  if (n_nodes % 2 != 0) throw CurveError(CurveErrorKind::InvalidSize, "circle: node count must be even");
  std::vector<PlanarPoint> nodes(n_nodes);
  const std::size_t half = n_nodes / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double u = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_nodes);
    nodes[i] = {radius * std::cos(u), radius * std::sin(u)};
    nodes[i + half] = -nodes[i];
  }
  return DiscreteCurve(std::move(nodes), Symmetry::AntipodalClosed);
}

DiscreteCurve straight_line(double angle, double half_length, std::size_t n_nodes) {
  if (!(half_length > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "line: half_length must be positive");
  if (n_nodes % 2 != 0 || n_nodes < DiscreteCurve::kMinNodes) {
    throw CurveError(CurveErrorKind::InvalidSize, "line: node count must be even and >= 16");
  }
  const PlanarPoint dir{std::cos(angle), std::sin(angle)};
  const double h = 2.0 * half_length / static_cast<double>(n_nodes - 1);
  std::vector<PlanarPoint> nodes(n_nodes);
  for (std::size_t i = 0; i < n_nodes / 2; ++i) {
    const double r = half_length - h * static_cast<double>(i);
    nodes[i] = dir * -r;
    nodes[n_nodes - 1 - i] = dir * r;
  }
  return DiscreteCurve(std::move(nodes), Symmetry::OpenClamped);
}

PlanarPoint barrier_point(double alpha, double u) {
  const double radial = std::pow(std::sin(kPi * u / alpha), -alpha / kPi);
  return {radial * std::cos(u), radial * std::sin(u)};
}

BarrierPair barrier_alpha(double alpha, std::size_t n_nodes, double u_margin) {
  if (!(alpha > 0.0 && alpha <= kPi)) throw CurveError(CurveErrorKind::InvalidArgument, "barrier: alpha must lie in (0, pi]");
  if (!(u_margin > 0.0 && u_margin < 0.5 * alpha)) {
    throw CurveError(CurveErrorKind::InvalidArgument, "barrier: u_margin must lie in (0, alpha/2)");
  }
  if (n_nodes < DiscreteCurve::kMinNodes || n_nodes % 2 != 0) {
    throw CurveError(CurveErrorKind::InvalidSize, "barrier: node count must be even and >= 16");
  }
  // dense parameter sampling, then equal-chord redistribution along the arc
  const std::size_t dense = 8 * n_nodes;
  std::vector<PlanarPoint> nodes(dense);
  for (std::size_t i = 0; i < dense; ++i) {
    const double u = u_margin + (alpha - 2.0 * u_margin) * static_cast<double>(i) / static_cast<double>(dense - 1);
    nodes[i] = barrier_point(alpha, u);
  }
  DiscreteCurve arc = resample_arclength(DiscreteCurve(std::move(nodes), Symmetry::OpenClamped), n_nodes);
  std::vector<PlanarPoint> mirrored(arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) mirrored[i] = -arc[i];
  DiscreteCurve antipodal = arc.with_nodes(std::move(mirrored));
  return {std::move(arc), std::move(antipodal)};
}

ConeEight cone_eight(double alpha, double area_target, std::size_t n_nodes, double margin) {
  const double half_opening = 0.5 * alpha - margin;
  if (!(alpha > 0.0 && alpha < kPi) || !(half_opening > 0.0 && half_opening < 0.5 * kPi)) {
    throw CurveError(CurveErrorKind::InvalidArgument, "cone_eight: infeasible opening (need 0 < alpha/2 - margin < pi/2)");
  }
  if (!(area_target > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "cone_eight: area_target must be positive");
  if (n_nodes % 2 != 0 || n_nodes < 64) {
    throw CurveError(CurveErrorKind::InvalidSize, "cone_eight: node count must be even and >= 64");
  }
  const double squeeze = std::tan(half_opening);
  std::vector<PlanarPoint> nodes(n_nodes);
  const std::size_t half = n_nodes / 2;
  for (std::size_t i = 1; i < half; ++i) {
    const PlanarPoint w = whitney_point(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n_nodes));
    nodes[i] = {w.x, squeeze * w.y};
    nodes[n_nodes - i] = -nodes[i];
  }
  const DiscreteCurve unit = resample_arclength(DiscreteCurve(std::move(nodes), Symmetry::FigureEight), n_nodes);
  // enclosed area is exactly quadratic in the scale factor
  const double scale = std::sqrt(area_target / enclosed_area(unit));
  std::vector<PlanarPoint> scaled(unit.nodes().begin(), unit.nodes().end());
  for (auto& p : scaled) p *= scale;
  return {unit.with_nodes(std::move(scaled)), squeeze, scale};
}

DiscreteCurve perturb(const DiscreteCurve& curve, double amplitude, int mode) {
  if (curve.symmetry() != Symmetry::FigureEight) {
    throw CurveError(CurveErrorKind::Unsupported, "perturb: needs a figure-eight curve");
  }
  if (!(amplitude >= 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "perturb: amplitude must be >= 0");
  if (mode < 1) throw CurveError(CurveErrorKind::InvalidArgument, "perturb: mode must be >= 1");
  if (amplitude == 0.0) return curve;

  const std::size_t n = curve.size();
  const auto frames = compute_frames(curve);
  std::vector<PlanarPoint> nodes(curve.nodes().begin(), curve.nodes().end());
  for (std::size_t i = 1; i < n / 2; ++i) {
    const double bump = amplitude * std::sin(2.0 * kPi * mode * static_cast<double>(i) / static_cast<double>(n));
    nodes[i] = curve[i] + frames[i].normal * bump;
    nodes[n - i] = -nodes[i];
  }
  DiscreteCurve out = curve.with_nodes(std::move(nodes));
  const auto crossings = self_intersections(out);
  if (!crossings.empty()) {
    throw CurveError(CurveErrorKind::InvalidArgument,
                     "perturb: result has " + std::to_string(crossings.size()) +
                         " extra self-intersection(s), first between segments " +
                         std::to_string(crossings.front().first) + " and " + std::to_string(crossings.front().second),
                     crossings.front().first);
  }
  return out;
}

std::vector<double> standard_radius_grid(const DiscreteCurve& curve) {
  const double r_max = curve.max_radius();
  std::vector<double> radii(16);
  for (std::size_t k = 0; k < radii.size(); ++k) radii[k] = r_max * (static_cast<double>(k) + 0.5) / 16.0;
  return radii;
}

}  // namespace eqflow
