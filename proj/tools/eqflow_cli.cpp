// eqflow: command-line front end (simulate / rescale / observe / validate).

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "eqflow/config.hpp"
#include "eqflow/io.hpp"
#include "eqflow/report.hpp"
#include "eqflow/validation.hpp"

namespace fs = std::filesystem;
using namespace eqflow;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kValidationFailure = 4;

struct Common {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
};

nlohmann::json load_with_overrides(const Common& c) {
  nlohmann::json config = c.config.empty() ? nlohmann::json::object() : load_config_file(c.config);
  for (const auto& o : c.overrides) apply_override(config, o);
  return config;
}

int cmd_simulate(const Common& c) {
  nlohmann::json config;
  ScenarioSpec spec;
  DiscreteCurve curve = [&] {
    config = load_with_overrides(c);
    spec = parse_scenario(config);
    return build_initial_curve(spec.generator, c.seed);
  }();
  const fs::path out = c.out.empty() ? fs::path(spec.out_dir) : fs::path(c.out);

  const auto start = std::chrono::steady_clock::now();
  const Trajectory traj = evolve(FlowState{std::move(curve), 0.0, 0}, spec.flow, spec.record_stride);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (traj.termination == Termination::StepFailure) {
    std::cerr << "numerical failure: " << traj.failure_message << "\n";
    return kNumericalFailure;
  }

  // write next to the target and swap in, so a failed write leaves nothing behind
  fs::path staging = out;
  staging += ".partial";
  fs::remove_all(staging);
  try {
    RunInfo info{config, c.seed, secs, spec.observables, spec.flow.n};
    write_trajectory(staging, traj, info);
    fs::remove_all(out);
    fs::rename(staging, out);
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }

  std::printf("termination %s after %zu steps, %zu snapshots, %.2f s\n",
              std::string(to_string(traj.termination)).c_str(), traj.snapshots.back().step_count,
              traj.snapshots.size(), secs);
  if (traj.singular_time) {
    std::printf("T_est %.10g  bracket [%.10g, %.10g]\n", traj.singular_time->estimate, traj.singular_time->lower,
                traj.singular_time->upper);
  }
  std::printf("wrote %s\n", out.string().c_str());
  return kOk;
}

int cmd_observe(const Common& c, const std::string& dir, int n_override) {
  StoredTrajectory stored = read_trajectory(dir);
  const int n = n_override > 0 ? n_override : stored.n;
  const ObservableSeries series = compute_observables(stored.snapshots, n, stored.singular_time);
  const fs::path out = c.out.empty() ? fs::path(dir) : fs::path(c.out);
  fs::create_directories(out);
  write_observables_csv(out / "observables.csv", series, standard_observable_columns());
  fs::create_directories(out / "angles");
  for (std::size_t i = 0; i < stored.snapshots.size(); ++i) {
    const auto& s = stored.snapshots[i];
    write_text_file(out / "angles" / snapshot_file_name(i), angle_profile_to_json(lagrangian_angle(s.curve, n), s.time, n));
  }
  std::printf("wrote %s and %zu angle profiles (n=%d)\n", (out / "observables.csv").string().c_str(), series.size(), n);
  return kOk;
}

int cmd_rescale(const Common& c, const std::string& dir, const std::string& schedule, std::size_t count,
                double r_in, double r_out) {
  StoredTrajectory stored = read_trajectory(dir);
  if (!stored.singular_time) throw std::invalid_argument("trajectory has no singular-time estimate");
  RescaleOptions opts;
  opts.schedule = schedule_from_string(schedule);
  opts.count = count;
  opts.r_in = r_in;
  opts.r_out = r_out;
  opts.n = stored.n;
  const RescaleReport report = rescale_trajectory(stored.snapshots, *stored.singular_time, opts);

  const fs::path out = c.out.empty() ? fs::path(dir) : fs::path(c.out);
  fs::create_directories(out);
  write_text_file(out / "rescale_report.json", to_json(report).dump(2) + "\n");
  for (const auto& e : report.entries) {
    std::printf("lambda %10.4g  s %9.5f  angle %7.3f deg  residual %.2e  multiplicity %.4f  sup_k %.4g  sup_perp %.4g\n",
                e.lambda, e.s, e.interline_angle_deg, e.residual, e.multiplicity, e.sup_k, e.sup_gamma_perp);
  }
  for (const auto& t : report.type2) {
    std::printf("type-II k=%d  lambda %.4g  |lambda z| %.4g\n", t.k, t.lambda, t.lambda_z_norm);
  }
  for (const auto& run : report.sensitivity) {
    if (!run.error.empty()) {
      std::printf("at T=%.10g: %s\n", run.singular_time, run.error.c_str());
    } else if (!run.entries.empty()) {
      std::printf("at T=%.10g: last angle %.3f deg, multiplicity %.4f\n", run.singular_time,
                  run.entries.back().interline_angle_deg, run.entries.back().multiplicity);
    }
  }
  std::printf("wrote %s\n", (out / "rescale_report.json").string().c_str());
  return kOk;
}

int cmd_validate(const Common& c, bool list) {
  const auto& names = validation_check_names();
  if (list) {
    for (const auto& n : names) std::printf("%s\n", n.c_str());
    return kOk;
  }
  nlohmann::json config = load_with_overrides(c);
  if (!config.contains("generator")) config["generator"] = {{"name", "whitney"}};
  const FlowParams flow = parse_scenario(config).flow;

  bool all = true;
  std::printf("%-22s %16s %16s %12s  %s\n", "check", "measured", "expected", "tolerance", "result");
  for (const auto& name : names) {
    const ValidationResult r = run_validation_check(name, flow);
    all = all && r.passed;
    std::printf("%-22s %16.9g %16.9g %12.3g  %s  %s\n", r.name.c_str(), r.measured, r.expected, r.tolerance,
                r.passed ? "PASS" : "FAIL", r.detail.c_str());
  }
  return all ? kOk : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant Lagrangian mean curvature flow of planar curves"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool with_config) {
    if (with_config) sub->add_option("--config", common.config, "scenario config (JSON)");
    sub->add_option("--out", common.out, "output directory");
    if (with_config) {
      sub->add_option("--override", common.overrides, "KEY=VALUE with KEY a dot path into the config");
      sub->add_option("--seed", common.seed, "seed for randomized perturbations");
    }
  };

  auto* simulate = app.add_subcommand("simulate", "run a scenario and write a trajectory directory");
  add_common(simulate, true);
  simulate->get_option("--config")->required();

  std::string trajectory;
  auto* observe = app.add_subcommand("observe", "recompute observables.csv for a trajectory directory");
  add_common(observe, false);
  observe->add_option("trajectory", trajectory, "trajectory directory")->required();
  int n_override = 0;
  observe->add_option("--n", n_override, "dimension override (default: from the manifest)");

  auto* rescale = app.add_subcommand("rescale", "central and Type-II rescaling analysis of a trajectory");
  add_common(rescale, false);
  rescale->add_option("trajectory", trajectory, "trajectory directory")->required();
  std::string schedule = "area-normalized";
  std::size_t count = 8;
  double r_in = 0.1, r_out = 0.5;
  rescale->add_option("--schedule", schedule, "dyadic | area-normalized")->capture_default_str();
  rescale->add_option("--count", count, "number of scheduled scales")->capture_default_str();
  rescale->add_option("--r-in", r_in, "inner annulus radius (rescaled units)")->capture_default_str();
  rescale->add_option("--r-out", r_out, "outer annulus radius (rescaled units)")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "run the built-in validation checks");
  add_common(validate, true);
  bool list = false;
  validate->add_flag("--list", list, "print check names without running them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*simulate) return cmd_simulate(common);
    if (*observe) return cmd_observe(common, trajectory, n_override);
    if (*rescale) return cmd_rescale(common, trajectory, schedule, count, r_in, r_out);
    if (*validate) return cmd_validate(common, list);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const StepFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
