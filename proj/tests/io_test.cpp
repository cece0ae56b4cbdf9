#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "eqflow/config.hpp"
#include "eqflow/io.hpp"
#include "eqflow/scenarios.hpp"
#include "eqflow/validation.hpp"

using namespace eqflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string pointer_of(const json& config) {
  try {
    parse_scenario(config);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("eqflow_io_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trajectory short_run(std::uint64_t seed) {
  json config = {{"generator", {{"name", "whitney"}, {"n_nodes", 128}, {"perturbation", {{"amplitude", 0.01}}}}},
                 {"flow", {{"t_max", 0.01}}},
                 {"record_stride", 50}};
  const auto spec = parse_scenario(config);
  return evolve(FlowState{build_initial_curve(spec.generator, seed), 0.0, 0}, spec.flow, spec.record_stride);
}

}  // namespace

TEST(Config, DefaultsFromMinimalConfig) {
  const auto spec = parse_scenario(json{{"generator", {{"name", "whitney"}}}});
  EXPECT_EQ(spec.generator.n_nodes, 512u);
  EXPECT_EQ(spec.flow.n, 2);
  EXPECT_EQ(spec.record_stride, 100u);
  EXPECT_EQ(spec.observables, standard_observable_columns());
}

TEST(Config, ErrorsCarryJsonPointers) {
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "whitney"}}}, {"flow", {{"cfl", -1.0}}}}), "/flow/cfl");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "whitney"}, {"n_nodes", 65}}}}), "/generator/n_nodes");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "spiral"}}}}), "/generator/name");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "whitney"}}}, {"colour", 1}}), "/colour");
  EXPECT_EQ(pointer_of(json{{"flow", {{"n", 2}}}}), "/generator");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "cone_eight"}, {"alpha", 4.0}}}}), "/generator/alpha");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "whitney"}}}, {"observables", {"area", "volume"}}}),
            "/observables/1");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "circle"}, {"perturbation", {{"amplitude", 0.1}}}}}}),
            "/generator/perturbation");
  EXPECT_EQ(pointer_of(json{{"generator", {{"name", "whitney"}}}, {"flow", {{"n", 2.5}}}}), "/flow/n");
}

TEST(Config, ObservablesKeepStandardOrder) {
  const auto spec =
      parse_scenario(json{{"generator", {{"name", "whitney"}}}, {"observables", {"cone_width", "area"}}});
  EXPECT_EQ(spec.observables, (std::vector<std::string>{"area", "cone_width"}));
}

TEST(Config, OverridesParseJsonValues) {
  json config = {{"generator", {{"name", "whitney"}}}};
  apply_override(config, "flow.cfl=0.1");
  apply_override(config, "generator.name=circle");
  apply_override(config, "generator.n_nodes=64");
  apply_override(config, "out_dir=\"x/y\"");
  EXPECT_EQ(config["flow"]["cfl"], 0.1);
  EXPECT_EQ(config["generator"]["name"], "circle");
  EXPECT_EQ(config["generator"]["n_nodes"], 64);
  EXPECT_EQ(config["out_dir"], "x/y");
  EXPECT_THROW(apply_override(config, "flow.cfl"), ConfigError);
  EXPECT_THROW(apply_override(config, "generator.name.x=1"), ConfigError);
  EXPECT_THROW(apply_override(config, "flow..cfl=1"), ConfigError);
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config_file("/nonexistent/eqflow.json"), ConfigError);
}

TEST(Config, SeedDrawsPerturbationMode) {
  GeneratorSpec g;
  g.n_nodes = 128;
  g.perturbation = Perturbation{0.01, std::nullopt};
  const auto a = build_initial_curve(g, 7);
  const auto b = build_initial_curve(g, 7);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(norm(a[i] - b[i]), 0.0);
  // some seed in a handful must pick a different mode
  bool differs = false;
  for (std::uint64_t s = 8; s < 16 && !differs; ++s) {
    const auto c = build_initial_curve(g, s);
    for (std::size_t i = 0; i < a.size(); ++i) differs = differs || norm(a[i] - c[i]) > 0.0;
  }
  EXPECT_TRUE(differs);
}

TEST(Snapshot, RoundTripIsBitwise) {
  const FlowState s{perturb(whitney(128), 0.013, 3), 0.0123456789012345678, 77};
  const FlowState back = snapshot_from_json(json::parse(snapshot_to_json(s)));
  EXPECT_EQ(back.time, s.time);
  EXPECT_EQ(back.curve.symmetry(), s.curve.symmetry());
  ASSERT_EQ(back.curve.size(), s.curve.size());
  for (std::size_t i = 0; i < s.curve.size(); ++i) {
    EXPECT_EQ(back.curve[i].x, s.curve[i].x);
    EXPECT_EQ(back.curve[i].y, s.curve[i].y);
  }
}

TEST(Snapshot, MalformedDocumentRejected) {
  EXPECT_ANY_THROW(snapshot_from_json(json{{"symmetry", "figure_eight"}}));
}

TEST(AngleProfile, ParallelToNodesWithNullAtOrigin) {
  const auto w = whitney(64);
  const auto angle = lagrangian_angle(w, 2);
  const json doc = json::parse(angle_profile_to_json(angle, 0.5, 2));
  ASSERT_EQ(doc["theta"].size(), w.size());
  EXPECT_TRUE(doc["theta"][0].is_null());
  EXPECT_TRUE(doc["theta"][32].is_null());
  EXPECT_EQ(doc["theta"][5].get<double>(), angle.theta[5]);
  EXPECT_EQ(doc["n"], 2);
  EXPECT_EQ(snapshot_file_name(42), "000042.json");
}

TEST(Csv, RoundTripKeepsValuesAndNan) {
  ObservableSeries s({"a", "b"});
  s.append(0.0, {1.0 / 3.0, std::numeric_limits<double>::quiet_NaN()});
  s.append(1e-7, {-2.5e-300, 4.0});
  const fs::path dir = scratch_dir("csv");
  fs::create_directories(dir);
  write_observables_csv(dir / "obs.csv", s, {"a", "b"});
  const auto back = read_observables_csv(dir / "obs.csv");
  EXPECT_EQ(back.columns(), s.columns());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.times()[1], 1e-7);
  EXPECT_EQ(back.row(0)[0], 1.0 / 3.0);
  EXPECT_TRUE(std::isnan(back.row(0)[1]));
  EXPECT_EQ(back.row(1)[0], -2.5e-300);
  fs::remove_all(dir);
}

TEST(Hash, MatchesGitBlobHash) {
  // `printf 'hello\n' | git hash-object --stdin`
  EXPECT_EQ(content_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
  EXPECT_EQ(content_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Trajectory, ManifestIsComplete) {
  const Trajectory traj = short_run(3);
  const fs::path dir = scratch_dir("manifest");
  RunInfo info{json{{"generator", {{"name", "whitney"}}}}, 3, 0.5, standard_observable_columns(), 2};
  const json m = write_trajectory(dir, traj, info);
  for (const char* key : {"config", "input_hash", "seed", "n", "termination", "initial_area", "initial_diameter",
                          "singular_time", "snapshots", "artifacts", "wall_clock_seconds"}) {
    EXPECT_TRUE(m.contains(key)) << key;
  }
  EXPECT_EQ(m["seed"], 3);
  EXPECT_EQ(m["termination"], "ReachedTMax");
  EXPECT_EQ(m["snapshots"].size(), traj.snapshots.size());
  for (const auto& entry : m["snapshots"]) EXPECT_TRUE(fs::exists(dir / entry["path"].get<std::string>()));
  EXPECT_TRUE(fs::exists(dir / "observables.csv"));
  EXPECT_EQ(json::parse(slurp(dir / "manifest.json")), m);

  const StoredTrajectory stored = read_trajectory(dir);
  ASSERT_EQ(stored.snapshots.size(), traj.snapshots.size());
  EXPECT_EQ(stored.snapshots.back().time, traj.snapshots.back().time);
  EXPECT_EQ(stored.snapshots.back().curve[5].x, traj.snapshots.back().curve[5].x);
  fs::remove_all(dir);
}

TEST(Trajectory, SameConfigAndSeedSameBytes) {
  const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
  RunInfo info{json::object(), 11, 0.0, standard_observable_columns(), 2};
  write_trajectory(d1, short_run(11), info);
  write_trajectory(d2, short_run(11), info);
  EXPECT_EQ(slurp(d1 / "observables.csv"), slurp(d2 / "observables.csv"));
  EXPECT_EQ(slurp(d1 / "snapshots" / "000000.json"), slurp(d2 / "snapshots" / "000000.json"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(ShippedConfigs, CircleCollapsesOnTime) {
  const auto spec = parse_scenario(load_config_file(EQFLOW_SOURCE_DIR "/configs/circle.json"));
  ASSERT_EQ(spec.generator.n_nodes, 256u);
  const auto traj = evolve(FlowState{build_initial_curve(spec.generator, 0), 0.0, 0}, spec.flow, spec.record_stride);
  EXPECT_EQ(traj.termination, Termination::AreaCollapse);
  ASSERT_TRUE(traj.singular_time.has_value());
  EXPECT_GE(traj.singular_time->estimate, 0.2475);
  EXPECT_LE(traj.singular_time->estimate, 0.2525);
}

TEST(ShippedConfigs, WhitneyCollapsesToThePoint) {
  const auto spec = parse_scenario(load_config_file(EQFLOW_SOURCE_DIR "/configs/whitney.json"));
  const auto traj = evolve(FlowState{build_initial_curve(spec.generator, 0), 0.0, 0}, spec.flow, spec.record_stride);
  EXPECT_TRUE(traj.termination == Termination::AreaCollapse || traj.termination == Termination::DiameterCollapse);
}

TEST(ShippedConfigs, ConeEightParses) {
  const auto spec = parse_scenario(load_config_file(EQFLOW_SOURCE_DIR "/configs/cone_eight.json"));
  EXPECT_EQ(spec.generator.name, "cone_eight");
  EXPECT_NO_THROW(build_initial_curve(spec.generator, 0));
}

TEST(Validation, ChecksPassWithDefaults) {
  const auto& names = validation_check_names();
  EXPECT_EQ(names.size(), 4u);
  for (const auto& name : names) {
    const auto r = run_validation_check(name, FlowParams{});
    EXPECT_TRUE(r.passed) << name << ": " << r.detail;
  }
  EXPECT_THROW(run_validation_check("nope", FlowParams{}), std::invalid_argument);
}

TEST(Validation, UnstableStepFailsCircleCheck) {
  FlowParams p;
  p.cfl = 5.0;
  EXPECT_FALSE(run_validation_check("circle_extinction", p).passed);
}
