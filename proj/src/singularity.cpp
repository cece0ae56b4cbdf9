#include "eqflow/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eqflow/observables.hpp"

namespace eqflow {
namespace {

constexpr double kPi = std::numbers::pi;

double canonical_direction(double angle) {
  double d = std::fmod(angle, kPi);
  if (d < 0.0) d += kPi;
  return d >= kPi ? 0.0 : d;
}

struct TlsLine {
  double direction = 0.0;
  double sum_sq_distance = 0.0;
};

// Principal axis of the second-moment matrix about the origin.
TlsLine fit_through_origin(const DiscreteCurve& curve, const std::vector<std::size_t>& idx) {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i : idx) {
    sxx += curve[i].x * curve[i].x;
    syy += curve[i].y * curve[i].y;
    sxy += curve[i].x * curve[i].y;
  }
  TlsLine line;
  line.direction = canonical_direction(0.5 * std::atan2(2.0 * sxy, sxx - syy));
  const PlanarPoint normal = perp(PlanarPoint{std::cos(line.direction), std::sin(line.direction)});
  for (std::size_t i : idx) {
    const double d = dot(curve[i], normal);
    line.sum_sq_distance += d * d;
  }
  return line;
}

}  // namespace

RescaledSnapshot central_rescale(const FlowState& snapshot, double singular_time, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("central_rescale: lambda must be positive");
  if (!(snapshot.time < singular_time)) {
    throw std::invalid_argument("central_rescale: snapshot is not before the singular time");
  }
  std::vector<PlanarPoint> nodes(snapshot.curve.nodes().begin(), snapshot.curve.nodes().end());
  for (auto& p : nodes) p *= lambda;
  return {snapshot.curve.with_nodes(std::move(nodes)), lambda, snapshot.time,
          lambda * lambda * (snapshot.time - singular_time)};
}

double area_normalizing_scale(const DiscreteCurve& curve) { return 1.0 / std::sqrt(enclosed_area(curve)); }

std::optional<AnnulusRegularity> annulus_regularity(const DiscreteCurve& curve, double r_in, double r_out, int n) {
  if (!(r_in > 0.0 && r_in < r_out)) throw std::invalid_argument("annulus_regularity: need 0 < r_in < r_out");
  if (n < 2) throw std::invalid_argument("annulus_regularity: n must be >= 2");
  const auto frames = compute_frames(curve);
  AnnulusRegularity out;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double r = norm(curve[i]);
    if (r < r_in || r > r_out) continue;
    ++out.node_count;
    out.sup_curvature = std::max(out.sup_curvature, norm(frames[i].curvature_vector));
    out.sup_normal_position = std::max(out.sup_normal_position, std::abs(dot(curve[i], frames[i].normal)));
  }
  if (out.node_count < 4) return std::nullopt;
  return out;
}

double LinePairFit::inter_line_angle() const {
  const double d = std::abs(direction_1 - direction_2);
  return std::min(d, kPi - d);
}

LinePairFit line_pair_fit(const DiscreteCurve& curve, double r_in, double r_out) {
  if (!(r_in >= 0.0 && r_in < r_out)) throw std::invalid_argument("line_pair_fit: need 0 <= r_in < r_out");
  const std::size_t n = curve.size();

  // split index between the two arcs through the origin (tip of lobe one)
  std::size_t tip = 0;
  if (curve.symmetry() == Symmetry::FigureEight) {
    double best = -1.0;
    for (std::size_t i = 1; i < n / 2; ++i) {
      const double r = norm2(curve[i]);
      if (r > best) {
        best = r;
        tip = i;
      }
    }
  }
  auto branch_of = [&](std::size_t i) {
    if (curve.symmetry() != Symmetry::FigureEight) return 0;
    return (i <= tip || i >= n - tip) ? 0 : 1;
  };

  LinePairFit fit;
  fit.branch_assignment.assign(n, -1);
  std::vector<std::size_t> members[2];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = norm(curve[i]);
    if (r < r_in || r > r_out) continue;
    const int b = branch_of(i);
    fit.branch_assignment[i] = b;
    members[b].push_back(i);
  }
  if (members[0].empty() && members[1].empty()) {
    throw CurveError(CurveErrorKind::InvalidArgument, "line_pair_fit: no nodes in the annulus");
  }

  double sum_sq = 0.0;
  if (!members[0].empty() && !members[1].empty()) {
    const TlsLine a = fit_through_origin(curve, members[0]);
    const TlsLine b = fit_through_origin(curve, members[1]);
    fit.direction_1 = a.direction;
    fit.direction_2 = b.direction;
    fit.two_branches = true;
    sum_sq = a.sum_sq_distance + b.sum_sq_distance;
  } else {
    std::vector<std::size_t> all = members[0].empty() ? members[1] : members[0];
    const TlsLine a = fit_through_origin(curve, all);
    fit.direction_1 = fit.direction_2 = a.direction;
    sum_sq = a.sum_sq_distance;
  }
  const double count = static_cast<double>(members[0].size() + members[1].size());
  fit.residual = std::sqrt(sum_sq / count) / r_out;
  return fit;
}

double multiplicity_estimate(const DiscreteCurve& curve, int n, std::span<const double> tau_grid) {
  if (tau_grid.empty()) throw std::invalid_argument("multiplicity_estimate: empty tau grid");
  std::vector<double> values;
  for (double tau : tau_grid) {
    if (!(tau > 0.0)) throw std::invalid_argument("multiplicity_estimate: tau must be positive");
    values.push_back(gaussian_density(curve, n, PlanarPoint{0.0, 0.0}, tau));
  }
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

const std::vector<double>& default_tau_grid() {
  static const std::vector<double> grid{0.05, 0.1, 0.2, 0.4};
  return grid;
}

Type2Rescale type2_rescale(std::span<const FlowState> snapshots, double singular_time, int k, int n) {
  if (k < 1) throw std::invalid_argument("type2_rescale: k must be >= 1");
  const double horizon = singular_time * (1.0 - 1.0 / k);

  double best = 0.0;
  std::size_t best_snap = 0, best_node = 0;
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    if (snapshots[s].time > horizon) continue;
    const auto frames = compute_frames(snapshots[s].curve);
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const double value = norm2(frames[i].curvature_vector) * (horizon - snapshots[s].time);
      if (value > best) {
        best = value;
        best_snap = s;
        best_node = i;
      }
    }
  }
  if (!(best > 0.0)) throw std::invalid_argument("type2_rescale: no curvature in the admissible window");

  const FlowState& src = snapshots[best_snap];
  const auto frames = compute_frames(src.curve);
  const NodeFrame& f = frames[best_node];
  const PlanarPoint z = src.curve[best_node];
  const double kz = norm(f.curvature_vector);
  // stencil rounding on a straight curve is not a blow-up point
  if (kz * src.curve.diameter() < 1e-9) {
    throw std::invalid_argument("type2_rescale: no curvature in the admissible window");
  }
  const double lambda = kz;

  std::vector<PlanarPoint> nodes(src.curve.nodes().begin(), src.curve.nodes().end());
  for (auto& p : nodes) p = (p - z) * lambda;

  Type2Rescale out{{src.curve.with_nodes(std::move(nodes)), lambda, src.time,
                    lambda * lambda * (src.time - singular_time)},
                   z, best_node, best_snap, lambda * norm(z), 0.0};
  const double r2 = norm2(z);
  out.singular_fraction = r2 > 0.0 ? (n - 1) * std::abs(dot(z, f.normal)) / r2 / kz : 0.5 * (n - 1);
  return out;
}

}  // namespace eqflow
