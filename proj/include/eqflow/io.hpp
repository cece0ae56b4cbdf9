#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqflow/flow.hpp"
#include "eqflow/observables.hpp"

namespace eqflow {

/// {"symmetry", "n_nodes", "nodes": [[x, y], ...], "time"} with 17 significant digits.
std::string snapshot_to_json(const FlowState& state);
FlowState snapshot_from_json(const nlohmann::json& doc);

/// {"time", "n", "theta": [...]} parallel to the snapshot's node array, null at origin nodes.
std::string angle_profile_to_json(const AngleProfile& angle, double time, int n);

/// "NNNNNN.json"
std::string snapshot_file_name(std::size_t index);

/// Header "time,<columns...>"; NaN cells are written as "nan".
void write_observables_csv(const std::filesystem::path& path, const ObservableSeries& series,
                           const std::vector<std::string>& columns);
ObservableSeries read_observables_csv(const std::filesystem::path& path);

/// Git blob hash ("blob <len>\0<bytes>", SHA-1) as 40 hex digits.
std::string content_hash(const std::string& bytes);

struct RunInfo {
  nlohmann::json config;  ///< config after overrides, echoed into the manifest
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> observables;
  int n = 2;
};

/// Writes snapshots/NNNNNN.json, observables.csv and manifest.json into `dir` and
/// returns the manifest. Existing artifacts in `dir` are replaced.
nlohmann::json write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const RunInfo& info);

struct StoredTrajectory {
  nlohmann::json manifest;
  std::vector<FlowState> snapshots;
  std::optional<SingularTimeEstimate> singular_time;
  int n = 2;
};

StoredTrajectory read_trajectory(const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace eqflow
