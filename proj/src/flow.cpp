#include "eqflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eqflow {

namespace {

constexpr double kPi = std::numbers::pi;

double max_curvature(const DiscreteCurve& curve) {
  double m = 0.0;
  for (const auto& f : compute_frames(curve)) m = std::max(m, norm(f.curvature_vector));
  return m;
}

std::optional<Termination> check_stop(const FlowState& s, const FlowParams& p, double area0, double diameter0) {
  const double diameter = s.curve.diameter();
  if (std::isfinite(p.stop.t_max) && p.stop.t_max - s.time <= 1e-12 * std::max(1.0, diameter * diameter)) {
    return Termination::ReachedTMax;
  }
  if (s.curve.is_closed() && enclosed_area(s.curve) < p.stop.min_area_fraction * area0) {
    return Termination::AreaCollapse;
  }
  if (diameter < p.stop.max_diameter_collapse * diameter0) return Termination::DiameterCollapse;
  if (max_curvature(s.curve) * diameter > p.stop.max_curvature_cap) return Termination::CurvatureBlowup;
  return std::nullopt;
}

}  // namespace

void FlowParams::validate() const {
  if (n < 2) throw std::invalid_argument("flow.n must be >= 2");
  if (!(cfl > 0.0)) throw std::invalid_argument("flow.cfl must be positive");
  if (resample_every < 1) throw std::invalid_argument("flow.resample_every must be >= 1");
  if (!(blend_radius_factor > 0.0)) throw std::invalid_argument("flow.blend_radius_factor must be positive");
  if (!(stop.max_curvature_cap > 0.0)) throw std::invalid_argument("stop.max_curvature_cap must be positive");
  if (!(stop.min_area_fraction > 0.0 && stop.min_area_fraction < 1.0)) {
    throw std::invalid_argument("stop.min_area_fraction must lie in (0, 1)");
  }
  if (!(stop.max_diameter_collapse > 0.0)) throw std::invalid_argument("stop.max_diameter_collapse must be positive");
  if (!(stop.t_max >= 0.0)) throw std::invalid_argument("stop.t_max must be >= 0");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::ReachedTMax:
      return "ReachedTMax";
    case Termination::CurvatureBlowup:
      return "CurvatureBlowup";
    case Termination::AreaCollapse:
      return "AreaCollapse";
    case Termination::DiameterCollapse:
      return "DiameterCollapse";
    case Termination::StepFailure:
      return "StepFailure";
  }
  return "?";
}

Termination termination_from_string(std::string_view name) {
  for (auto t : {Termination::ReachedTMax, Termination::CurvatureBlowup, Termination::AreaCollapse,
                 Termination::DiameterCollapse, Termination::StepFailure}) {
    if (to_string(t) == name) return t;
  }
  throw std::invalid_argument("unknown termination '" + std::string(name) + "'");
}

const std::vector<std::string>& standard_observable_columns() {
  static const std::vector<std::string> columns{"area",     "area_rate",        "max_curvature",
                                                "min_seg_len", "gaussian_density", "theta_min",
                                                "theta_max", "cone_width"};
  return columns;
}

std::vector<PlanarPoint> velocity_field(const DiscreteCurve& curve, int n, double blend_radius) {
  const auto frames = compute_frames(curve);
  std::vector<PlanarPoint> v(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    // pinned origin nodes: k = 0 by odd symmetry, clamped ends: boundary data
    if (curve.is_origin_node(i) || curve.is_clamped_node(i)) continue;
    v[i] = frames[i].curvature_vector - singular_term(curve, frames, i, n, blend_radius);
  }
  return v;
}

double stable_dt(const DiscreteCurve& curve, const FlowParams& params) {
  const double h = curve.min_segment();
  return params.cfl * h * h;
}

FlowState step(const FlowState& state, const FlowParams& params) {
  double dt = stable_dt(state.curve, params);
  if (std::isfinite(params.stop.t_max)) dt = std::min(dt, params.stop.t_max - state.time);
  return step(state, params, dt);
}

FlowState step(const FlowState& state, const FlowParams& params, double dt) {
  const DiscreteCurve& curve = state.curve;
  const double scale = curve.diameter();
  if (!(dt >= 1e-16 * scale * scale)) {
    throw StepFailure("time step underflow: dt = " + std::to_string(dt) + " at t = " + std::to_string(state.time));
  }
  const double blend = params.blend_radius_factor * curve.mean_spacing();

  try {
    const auto v1 = velocity_field(curve, params.n, blend);
    std::vector<PlanarPoint> mid(curve.nodes().begin(), curve.nodes().end());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] += v1[i] * (0.5 * dt);
    const auto v2 = velocity_field(curve.with_nodes(std::move(mid)), params.n, blend);

    std::vector<PlanarPoint> next(curve.nodes().begin(), curve.nodes().end());
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] += v2[i] * dt;
      if (!is_finite(next[i])) throw StepFailure("node " + std::to_string(i) + " left the finite range");
    }
    DiscreteCurve advanced = curve.with_nodes(std::move(next));
    if (advanced.is_closed()) advanced = enforce_antipodal(advanced);

    FlowState out{std::move(advanced), state.time + dt, state.step_count + 1};
    if (out.step_count % static_cast<std::size_t>(params.resample_every) == 0) {
      out.curve = resample_arclength(out.curve, out.curve.size());
    }
    return out;
  } catch (const CurveError& e) {
    throw StepFailure(std::string("step failed: ") + e.what());
  }
}

SingularTimeEstimate estimate_singular_time(std::span<const double> times, std::span<const double> areas) {
  if (times.size() != areas.size() || times.size() < 2) {
    throw std::invalid_argument("singular-time estimate needs at least two (time, area) samples");
  }
  for (double a : areas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("areas must be positive and finite");
  }
  const std::size_t n = times.size();
  if (!(areas.back() < areas.front())) throw std::invalid_argument("area series is not decreasing");

  const std::size_t tail = std::max<std::size_t>(2, (n + 9) / 10);
  double st = 0, sa = 0, stt = 0, sta = 0;
  for (std::size_t i = n - tail; i < n; ++i) {
    st += times[i];
    sa += areas[i];
    stt += times[i] * times[i];
    sta += times[i] * areas[i];
  }
  const double m = static_cast<double>(tail);
  const double slope = (m * sta - st * sa) / (m * stt - st * st);
  if (!(slope < 0.0)) throw std::invalid_argument("area series is not decreasing over its final 10%");
  const double intercept = (sa - slope * st) / m;

  SingularTimeEstimate est;
  est.estimate = -intercept / slope;
  est.lower = times.back() + areas.back() / (3.0 * kPi);
  est.upper = times.back() + areas.back() / kPi;
  est.bracketed = est.lower <= est.estimate && est.estimate <= est.upper;
  return est;
}

SingularTimeEstimate estimate_singular_time(const ObservableSeries& series, const std::string& column) {
  const auto areas = series.column(column);
  return estimate_singular_time(series.times(), areas);
}

ObservableSeries compute_observables(const std::vector<FlowState>& snapshots, int n,
                                     const std::optional<SingularTimeEstimate>& singular_time) {
  ObservableSeries series(standard_observable_columns());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> areas;
  for (const auto& s : snapshots) areas.push_back(s.curve.is_closed() ? lobe_area(s.curve) : nan);

  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const FlowState& s = snapshots[i];
    double rate = nan;
    if (snapshots.size() > 1) {
      const std::size_t a = i == 0 ? 0 : i - 1;
      const std::size_t b = i == 0 ? 1 : i;
      rate = (areas[b] - areas[a]) / (snapshots[b].time - snapshots[a].time);
    }
    double density = nan;
    if (singular_time && singular_time->estimate > s.time) {
      density = gaussian_density(s.curve, n, singular_time->estimate - s.time);
    }
    double theta_min = nan, theta_max = nan;
    try {
      const auto angle = lagrangian_angle(s.curve, n);
      theta_min = angle.min();
      theta_max = angle.max();
    } catch (const CurveError&) {
      // open curves through the origin have no angle there
    }
    series.append(s.time, {areas[i], rate, max_curvature(s.curve), s.curve.min_segment(), density, theta_min,
                           theta_max, cone_width(s.curve)});
  }
  return series;
}

Trajectory evolve(const FlowState& initial, const FlowParams& params, std::size_t record_stride) {
  params.validate();
  if (record_stride == 0) throw std::invalid_argument("record_stride must be >= 1");
  if (initial.curve.is_closed() && initial.curve.symmetry_defect() != 0.0) {
    throw std::invalid_argument("initial curve violates its antipodal symmetry contract");
  }

  Trajectory traj;
  traj.initial_area = initial.curve.is_closed() ? enclosed_area(initial.curve) : 0.0;
  traj.initial_diameter = initial.curve.diameter();
  traj.snapshots.push_back(initial);

  FlowState state = initial;
  for (;;) {
    if (auto stop = check_stop(state, params, traj.initial_area, traj.initial_diameter)) {
      traj.termination = *stop;
      break;
    }
    if (state.step_count - initial.step_count >= params.max_steps) {
      traj.termination = Termination::StepFailure;
      traj.failure_message = "step budget exhausted";
      break;
    }
    try {
      state = step(state, params);
    } catch (const StepFailure& e) {
      traj.termination = Termination::StepFailure;
      traj.failure_message = e.what();
      break;
    }
    if ((state.step_count - initial.step_count) % record_stride == 0) traj.snapshots.push_back(state);
  }
  if (traj.snapshots.back().time < state.time) traj.snapshots.push_back(state);

  if (initial.curve.is_closed() && traj.snapshots.size() >= 3) {
    std::vector<double> t, a;
    for (const auto& s : traj.snapshots) {
      t.push_back(s.time);
      a.push_back(lobe_area(s.curve));
    }
    try {
      traj.singular_time = estimate_singular_time(t, a);
    } catch (const std::invalid_argument&) {
      // no collapse within the run
    }
  }
  traj.observables = compute_observables(traj.snapshots, params.n, traj.singular_time);
  return traj;
}

}  // namespace eqflow
