#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqflow/flow.hpp"
#include "eqflow/singularity.hpp"

namespace eqflow {

enum class Schedule { Dyadic, AreaNormalized };
Schedule schedule_from_string(const std::string& name);
std::string to_string(Schedule s);

struct RescaleOptions {
  Schedule schedule = Schedule::AreaNormalized;
  std::size_t count = 8;
  double r_in = 0.1;  ///< annulus, in rescaled units
  double r_out = 0.5;
  int n = 2;
  std::vector<int> type2_k{4, 8, 16};
};

struct RescaleEntry {
  double lambda = 0.0;
  double s = 0.0;
  double source_time = 0.0;
  double interline_angle_deg = 0.0;
  double residual = 0.0;
  double multiplicity = 0.0;
  double sup_k = 0.0;  ///< NaN when the annulus is empty
  double sup_gamma_perp = 0.0;
  double lambda_z_norm = 0.0;  ///< 0 for central rescalings
};

struct Type2Entry {
  int k = 0;
  double lambda = 0.0;
  double time = 0.0;
  double lambda_z_norm = 0.0;
  double singular_fraction = 0.0;
};

struct SensitivityRun {
  double singular_time = 0.0;
  std::vector<RescaleEntry> entries;
  std::string error;  ///< set when the schedule could not be built at this time
};

struct RescaleReport {
  double singular_time = 0.0;
  RescaleOptions options;
  std::vector<RescaleEntry> entries;
  std::vector<Type2Entry> type2;
  std::vector<SensitivityRun> sensitivity;  ///< central schedule redone at the bracket ends
};

/// Central rescalings along the schedule. Dyadic: lambda = 2^j, each paired with the recorded
/// snapshot whose rescaled time is closest to -1/(3 pi). Area-normalized: the last `count`
/// snapshots before T, each scaled to unit enclosed area.
/// Needs a figure-eight trajectory with at least 8 snapshots before T.
RescaleReport rescale_trajectory(std::span<const FlowState> snapshots, double singular_time,
                                 const RescaleOptions& options);

/// As above at the estimate, plus the central schedule repeated at its lower and upper bounds.
RescaleReport rescale_trajectory(std::span<const FlowState> snapshots, const SingularTimeEstimate& estimate,
                                 const RescaleOptions& options);

nlohmann::json to_json(const RescaleReport& report);

}  // namespace eqflow
