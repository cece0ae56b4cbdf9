#include "eqflow/validation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "eqflow/observables.hpp"
#include "eqflow/scenarios.hpp"

namespace eqflow {
namespace {

constexpr double kPi = std::numbers::pi;

ValidationResult circle_extinction(FlowParams p) {
  ValidationResult r{"circle_extinction", std::numeric_limits<double>::quiet_NaN(), 0.25, 0.0025, false, ""};
  const Trajectory traj = evolve(FlowState{circle(1.0, 128), 0.0, 0}, p, 50);
  r.detail = std::string(to_string(traj.termination));
  if (traj.termination != Termination::AreaCollapse || !traj.singular_time) return r;
  r.measured = traj.singular_time->estimate;
  r.passed = std::abs(r.measured - r.expected) <= r.tolerance;
  return r;
}

ValidationResult symmetry_exactness(FlowParams p) {
  ValidationResult r{"symmetry_exactness", 0.0, 0.0, 0.0, false, ""};
  p.stop.t_max = std::numeric_limits<double>::infinity();
  FlowState s{whitney(128), 0.0, 0};
  std::size_t steps = 0;
  try {
    for (; steps < 200; ++steps) {
      s = step(s, p);
      r.measured = std::max(r.measured, s.curve.symmetry_defect());
    }
  } catch (const StepFailure& e) {
    r.measured = std::numeric_limits<double>::quiet_NaN();
    r.detail = e.what();
    return r;
  }
  r.detail = std::to_string(steps) + " steps";
  r.passed = r.measured == 0.0;
  return r;
}

ValidationResult density_calibration(const FlowParams&) {
  ValidationResult r{"density_calibration", 0.0, 1.0, 1e-3, false, "line, n=2, tau=0.2"};
  const double tau = 0.2;
  r.measured = gaussian_density(straight_line(0.3, 30.0 * std::sqrt(tau), 4000), 2, tau);
  r.passed = std::abs(r.measured - r.expected) <= r.tolerance;
  return r;
}

ValidationResult area_rate_bracket(FlowParams p) {
  // worst per-lobe slope, reported in units of pi; the bracket is [-3.15, -0.85]
  ValidationResult r{"area_rate_bracket", std::numeric_limits<double>::quiet_NaN(), -2.0, 1.15, false, ""};
  p.stop.min_area_fraction = 0.05;
  const Trajectory traj = evolve(FlowState{whitney(256), 0.0, 0}, p, 200);
  r.detail = std::string(to_string(traj.termination));
  if (traj.termination != Termination::AreaCollapse) return r;
  const auto rate = traj.observables.column("area_rate");
  double worst = -2.0 * kPi;
  for (double v : rate) {
    if (!std::isfinite(v)) return r;
    if (std::abs(v + 2.0 * kPi) > std::abs(worst + 2.0 * kPi)) worst = v;
  }
  r.measured = worst / kPi;
  r.passed = std::abs(r.measured - r.expected) <= r.tolerance;
  return r;
}

}  // namespace

const std::vector<std::string>& validation_check_names() {
  static const std::vector<std::string> names{"circle_extinction", "symmetry_exactness", "density_calibration",
                                              "area_rate_bracket"};
  return names;
}

ValidationResult run_validation_check(const std::string& name, const FlowParams& base) {
  try {
    if (name == "circle_extinction") return circle_extinction(base);
    if (name == "symmetry_exactness") return symmetry_exactness(base);
    if (name == "density_calibration") return density_calibration(base);
    if (name == "area_rate_bracket") return area_rate_bracket(base);
  } catch (const std::exception& e) {
    ValidationResult r;
    r.name = name;
    r.measured = std::numeric_limits<double>::quiet_NaN();
    r.detail = e.what();
    return r;
  }
  throw std::invalid_argument("unknown validation check '" + name + "'");
}

}  // namespace eqflow
