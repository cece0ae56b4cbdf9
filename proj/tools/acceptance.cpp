// Acceptance runs: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "eqflow/flow.hpp"
#include "eqflow/observables.hpp"
#include "eqflow/report.hpp"
#include "eqflow/scenarios.hpp"
#include "eqflow/singularity.hpp"

using namespace eqflow;

namespace {

constexpr double kPi = std::numbers::pi;

// tolerances, pinned
constexpr double kExtinctionRelTol = 0.01;
constexpr double kRadiusErrTol = 1e-3;
constexpr double kRadiusWindow = 0.24;
constexpr double kOrderLo = 3.5, kOrderHi = 4.5;
constexpr double kCircleSeconds = 30.0;
constexpr double kCollapseRadiusFrac = 0.05;
constexpr double kCollapseAreaFrac = 1e-3;
constexpr double kRateLo = -3.0 * kPi - 0.15 * kPi, kRateHi = -kPi + 0.15 * kPi;
constexpr double kMonotoneSlack = 1e-3;
constexpr double kFitAngleDeg = 5.0;
constexpr double kMultLo = 1.8, kMultHi = 2.2;
constexpr double kConeSlack = 0.02;
constexpr double kThetaSlack = 1e-3;
constexpr double kHeatResidual = 0.1;
constexpr double kDensityTol = 1e-3, kDoubledTol = 2e-3;
constexpr double kAvoidFrac = 0.1;
constexpr int kNestings = 20;
constexpr double kTypeIIGrowth = 10.0;
constexpr double kTypeIIAreaFloor = 0.25;

int failures = 0;

void verdict(int id, const char* name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d  %-26s %s  %s\n", id, name, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: circle -----------------------------------------------------------------

struct CircleRun {
  double T = 0.0;
  double node_err = 0.0;  // sup |x_i| - R(t)
  double area_err = 0.0;  // sup sqrt(A/pi) - R(t)
  double secs = 0.0;
};

CircleRun run_circle(std::size_t N) {
  const auto t0 = std::chrono::steady_clock::now();
  FlowParams p;
  const Trajectory traj = evolve(FlowState{circle(1.0, N), 0.0, 0}, p, 20);
  CircleRun out;
  out.secs = seconds_since(t0);
  out.T = traj.singular_time ? traj.singular_time->estimate : std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : traj.snapshots) {
    if (s.time > kRadiusWindow) break;
    const double R = std::sqrt(1.0 - 4.0 * s.time);
    for (const auto& x : s.curve.nodes()) out.node_err = std::max(out.node_err, std::abs(norm(x) - R));
    out.area_err = std::max(out.area_err, std::abs(std::sqrt(enclosed_area(s.curve) / kPi) - R));
  }
  return out;
}

void criterion_circle() {
  const CircleRun a = run_circle(256);
  const CircleRun b = run_circle(512);
  const double ratio = a.area_err / b.area_err;
  const bool pass = std::abs(a.T - 0.25) <= kExtinctionRelTol * 0.25 && a.node_err <= kRadiusErrTol &&
                    a.area_err <= kRadiusErrTol && a.secs <= kCircleSeconds && ratio >= kOrderLo && ratio <= kOrderHi;
  verdict(1, "circle oracle", pass,
          fmt("T=%.6f node_err=%.2e area_radius_err=%.2e order_ratio=%.3f runtime=%.2fs", a.T, a.node_err, a.area_err,
              ratio, a.secs));
}

// ---- shared Whitney run --------------------------------------------------------

struct WhitneyRun {
  Trajectory traj;
  double T = 0.0;
};

WhitneyRun run_whitney() {
  FlowParams p;
  p.stop.min_area_fraction = 1e-6;
  p.stop.max_diameter_collapse = 1e-9;
  p.stop.max_curvature_cap = 1e9;
  WhitneyRun w{evolve(FlowState{whitney(512), 0.0, 0}, p, 200), 0.0};
  w.T = w.traj.singular_time ? w.traj.singular_time->estimate : std::numeric_limits<double>::quiet_NaN();
  return w;
}

// ---- 2, 3: collapse and area rate -------------------------------------------------

void criterion_collapse(const WhitneyRun& w) {
  const auto& snaps = w.traj.snapshots;
  const double r_final = snaps.back().curve.max_radius();
  const double a0 = lobe_area(snaps.front().curve);
  const double a_final = lobe_area(snaps.back().curve);
  bool bracket = std::isfinite(w.T);
  double worst_lo = -1, worst_hi = -1;  // (T - t) pi / A, must lie in [1/3, 1]
  for (const auto& s : snaps) {
    const double A = lobe_area(s.curve);
    const double lo = s.time + A / (3 * kPi), hi = s.time + A / kPi;
    bracket = bracket && w.T >= lo && w.T <= hi;
    const double q = (w.T - s.time) * kPi / A;
    worst_lo = worst_lo < 0 ? q : std::min(worst_lo, q);
    worst_hi = std::max(worst_hi, q);
  }
  const bool pass = r_final <= kCollapseRadiusFrac * w.traj.initial_diameter && a_final <= kCollapseAreaFrac * a0 && bracket;
  verdict(2, "Whitney collapse", pass,
          fmt("T_est=%.7f max|x|/D0=%.2e area/A0=%.2e pi(T-t)/A in [%.3f, %.3f] over %zu snapshots", w.T,
              r_final / w.traj.initial_diameter, a_final / a0, worst_lo, worst_hi, snaps.size()));
}

void criterion_area_rate(const WhitneyRun& w) {
  const auto& snaps = w.traj.snapshots;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const double slope =
        (lobe_area(snaps[i].curve) - lobe_area(snaps[i - 1].curve)) / (snaps[i].time - snaps[i - 1].time);
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  }
  verdict(3, "area-rate bracket", lo >= kRateLo && hi <= kRateHi,
          fmt("per-lobe slopes/pi in [%.4f, %.4f], allowed [%.2f, %.2f]", lo / kPi, hi / kPi, kRateLo / kPi,
              kRateHi / kPi));
}

// ---- 4: monotonicity ------------------------------------------------------------

void criterion_monotonicity(const WhitneyRun& w) {
  double worst_d = -std::numeric_limits<double>::infinity(), worst_t = worst_d;
  double prev_d = 0, prev_t = 0, first_d = 0, last_d = 0;
  bool first = true;
  for (const auto& s : w.traj.snapshots) {
    const double tau = w.T - s.time;
    if (!(tau > 0.0)) break;
    const double d = gaussian_density(s.curve, 2, tau);
    const double t2 = theta_squared_density(s.curve, 2, tau);
    if (first) {
      first_d = d;
      first = false;
    } else {
      worst_d = std::max(worst_d, d - prev_d);
      worst_t = std::max(worst_t, t2 - prev_t);
    }
    prev_d = d;
    prev_t = t2;
    last_d = d;
  }
  verdict(4, "Huisken monotonicity", worst_d <= kMonotoneSlack && worst_t <= kMonotoneSlack,
          fmt("largest step increase: density %.2e, theta^2 density %.2e (density %.4f -> %.4f)", worst_d, worst_t,
              first_d, last_d));
}

// ---- 5: multiplicity two ---------------------------------------------------------

void criterion_multiplicity(const WhitneyRun& w) {
  RescaleOptions opts;
  opts.schedule = Schedule::AreaNormalized;
  opts.count = 3;
  const RescaleReport r = rescale_trajectory(w.traj.snapshots, w.T, opts);
  bool angle_ok = true, mult_ok = true, k_dec = true, perp_dec = true;
  std::string detail;
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    const auto& e = r.entries[i];
    angle_ok = angle_ok && e.interline_angle_deg <= kFitAngleDeg;
    mult_ok = mult_ok && e.multiplicity >= kMultLo && e.multiplicity <= kMultHi;
    if (i > 0) {
      k_dec = k_dec && e.sup_k < r.entries[i - 1].sup_k;
      perp_dec = perp_dec && e.sup_gamma_perp < r.entries[i - 1].sup_gamma_perp;
    }
    detail += fmt("[angle %.2f deg, sup_k %.3f, sup_perp %.4f, mult %.4f] ", e.interline_angle_deg, e.sup_k,
                  e.sup_gamma_perp, e.multiplicity);
  }
  detail += fmt("angle<=5:%d k_dec:%d perp_dec:%d mult:%d", angle_ok, k_dec, perp_dec, mult_ok);
  verdict(5, "multiplicity-two blow-up", angle_ok && mult_ok && k_dec && perp_dec, detail);
}

// ---- 6: hypothesis preservation --------------------------------------------------

void criterion_hypotheses(const WhitneyRun& w) {
  const auto& snaps = w.traj.snapshots;
  const auto grid = standard_radius_grid(snaps.front().curve);
  std::vector<int> prev(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) prev[k] = circle_intersections(snaps.front().curve, grid[k]);
  bool counts_ok = true, cone_ok = true, simple_ok = true;
  double prev_cone = cone_width(snaps.front().curve), worst_cone = -1.0;
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const int c = circle_intersections(snaps[i].curve, grid[k]);
      counts_ok = counts_ok && c <= prev[k];
      prev[k] = c;
    }
    const double cw = cone_width(snaps[i].curve);
    worst_cone = std::max(worst_cone, cw - prev_cone);
    cone_ok = cone_ok && cw <= prev_cone + kConeSlack;
    prev_cone = cw;
  }
  for (const auto& s : snaps) simple_ok = simple_ok && self_intersections(s.curve).empty();
  verdict(6, "hypothesis preservation", counts_ok && cone_ok && simple_ok,
          fmt("intersection counts monotone:%d, largest cone-width increase %.2e rad, origin-only crossing:%d",
              counts_ok, worst_cone, simple_ok));
}

// ---- 7: theta maximum principle --------------------------------------------------

void criterion_theta(const WhitneyRun& w) {
  const auto& snaps = w.traj.snapshots;
  FlowParams p;
  double worst_max = -1.0, worst_min = -1.0, worst_res = 0.0;
  double prev_max = 0, prev_min = 0;
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    const auto angle = lagrangian_angle(snaps[i].curve, 2);
    const double mx = angle.max(), mn = angle.min();
    if (i > 0) {
      worst_max = std::max(worst_max, mx - prev_max);
      worst_min = std::max(worst_min, prev_min - mn);
    }
    prev_max = mx;
    prev_min = mn;
    // a few short steps give a clean time derivative
    FlowState later = snaps[i];
    for (int k = 0; k < 4; ++k) later = step(later, p);
    const double window = 0.1 * snaps[i].curve.max_radius();
    worst_res = std::max(worst_res, angle_heat_residual(snaps[i].curve, snaps[i].time, later.curve, later.time, 2, window));
  }
  verdict(7, "theta maximum principle", worst_max <= kThetaSlack && worst_min <= kThetaSlack && worst_res <= kHeatResidual,
          fmt("largest max-theta rise %.2e, min-theta drop %.2e, heat residual %.3e", worst_max, worst_min, worst_res));
}

// ---- 8: density calibration ------------------------------------------------------

DiscreteCurve doubled_line(double phi, double reach, std::size_t N) {
  // figure eight whose lobe runs out along phi and straight back: the line covered twice
  const std::size_t half = N / 2, out = half / 2;
  std::vector<PlanarPoint> nodes(N);
  const PlanarPoint dir{std::cos(phi), std::sin(phi)};
  for (std::size_t i = 1; i < half; ++i) {
    const double r = i <= out ? reach * static_cast<double>(i) / out : reach * (static_cast<double>(half - i) - 0.5) / out;
    nodes[i] = dir * r;
    nodes[N - i] = -nodes[i];
  }
  return DiscreteCurve(std::move(nodes), Symmetry::FigureEight);
}

void criterion_density() {
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    for (double tau : {0.05, 0.2, 0.8}) {
      worst = std::max(worst, std::abs(gaussian_density(straight_line(0.7, 15.0 * std::sqrt(tau), 3000), n, tau) - 1.0));
    }
  }
  const double two = gaussian_density(doubled_line(0.7, 15.0 * std::sqrt(0.8), 12000), 2, 0.2);
  verdict(8, "density calibration", worst <= kDensityTol && std::abs(two - 2.0) <= kDoubledTol,
          fmt("single line max |d-1| = %.2e, doubled line %.6f", worst, two));
}

// ---- 9: avoidance ----------------------------------------------------------------

double point_segment_distance(PlanarPoint p, PlanarPoint a, PlanarPoint b) {
  const PlanarPoint e = b - a;
  const double t = std::clamp(dot(p - a, e) / norm2(e), 0.0, 1.0);
  return norm(p - (a + e * t));
}

// Distance between the curves over nodes outside the ball of radius `window`, both ways.
double separation(const DiscreteCurve& a, const DiscreteCurve& b, double window) {
  double best = std::numeric_limits<double>::infinity();
  auto one_way = [&](const DiscreteCurve& from, const DiscreteCurve& to) {
    for (const auto& p : from.nodes()) {
      if (norm(p) < window) continue;
      for (std::size_t s = 0; s < to.segment_count(); ++s) {
        best = std::min(best, point_segment_distance(p, to[s], to[to.next(s)]));
      }
    }
  };
  one_way(a, b);
  one_way(b, a);
  return best;
}

void criterion_avoidance() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> alpha_d(0.2 * kPi, 0.45 * kPi), area_d(0.1, 0.5), amp_d(0.0, 0.01);
  std::uniform_int_distribution<int> mode_d(1, 5);
  FlowParams p;
  const DiscreteCurve outer0 = whitney(256);
  const double outer_area = enclosed_area(outer0);
  int passed = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < kNestings; ++trial) {
    const double alpha = alpha_d(rng);
    DiscreteCurve inner0 = cone_eight(alpha, area_d(rng) * outer_area, 256).curve;
    const double amp = amp_d(rng) * inner0.max_radius();
    inner0 = perturb(inner0, amp, mode_d(rng));
    // "away from the origin" = outside a fixed ball a quarter of the inner curve's size
    const double window = 0.25 * inner0.max_radius();
    const double d0 = separation(inner0, outer0, window);
    const double inner_a0 = enclosed_area(inner0);

    FlowState inner{inner0, 0.0, 0}, outer{outer0, 0.0, 0};
    double dmin = d0;
    bool ok = d0 > 0.0;
    try {
      while (ok && enclosed_area(inner.curve) > 1e-3 * inner_a0 && inner.curve.max_radius() > window) {
        const double dt = std::min(stable_dt(inner.curve, p), stable_dt(outer.curve, p));
        inner = step(inner, p, dt);
        outer = step(outer, p, dt);
        if (inner.step_count % 10 == 0) {
          dmin = std::min(dmin, separation(inner.curve, outer.curve, window));
          ok = dmin >= kAvoidFrac * d0;
        }
      }
    } catch (const StepFailure&) {
      ok = false;
    }
    worst_ratio = std::min(worst_ratio, dmin / d0);
    if (ok) ++passed;
  }
  verdict(9, "avoidance", passed == kNestings,
          fmt("%d/%d nestings kept separation; smallest d_min/d0 = %.3f", passed, kNestings, worst_ratio));
}

// ---- 10: Type-II candidate ----------------------------------------------------------

void criterion_type2() {
  const double alpha = 0.75 * kPi;
  const ConeEight c = cone_eight(alpha, 10.0, 512, 0.05);
  const bool in_sector = cone_width(c.curve) <= alpha;
  FlowParams p;
  p.stop.min_area_fraction = 1e-4;
  p.stop.max_curvature_cap = 1e9;
  p.stop.max_diameter_collapse = 1e-9;
  const Trajectory traj = evolve(FlowState{c.curve, 0.0, 0}, p, 200);
  const double T = traj.singular_time ? traj.singular_time->estimate : std::numeric_limits<double>::quiet_NaN();
  const double a0 = enclosed_area(c.curve);
  const auto kcol = traj.observables.column("max_curvature");
  double base = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto& s = traj.snapshots[i];
    if (enclosed_area(s.curve) < kTypeIIAreaFloor * a0 || !(s.time < T)) break;
    const double v = kcol[i] * (T - s.time);
    if (i == 0) base = v;
    peak = std::max(peak, v);
  }
  const double growth = peak / base;
  std::vector<double> div;
  for (int k : {4, 8, 16}) div.push_back(type2_rescale(traj.snapshots, T, k, 2).divergence);
  const bool div_up = div[1] > div[0] && div[2] > div[1];
  verdict(10, "Type-II candidate", in_sector && growth >= kTypeIIGrowth && div_up,
          fmt("inside sector:%d, max|k|(T-t) growth %.2fx while area >= 25%%, |lambda z| over k=4,8,16: %.3f %.3f %.3f",
              in_sector, growth, div[0], div[1], div[2]));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  auto want = [&](int id) { return only == 0 || only == id; };
  if (want(1)) criterion_circle();
  if (only == 0 || (only >= 2 && only <= 7)) {
    const WhitneyRun w = run_whitney();
    if (want(2)) criterion_collapse(w);
    if (want(3)) criterion_area_rate(w);
    if (want(4)) criterion_monotonicity(w);
    if (want(5)) criterion_multiplicity(w);
    if (want(6)) criterion_hypotheses(w);
    if (want(7)) criterion_theta(w);
  }
  if (want(8)) criterion_density();
  if (want(9)) criterion_avoidance();
  if (want(10)) criterion_type2();
  std::printf("%d failed (%.1f s)\n", failures, seconds_since(t0));
  return failures;
}
