#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eqflow/curve.hpp"
#include "eqflow/observables.hpp"

namespace eqflow {

/// When to stop integrating. A run halts at the first criterion that fires.
struct StopCriteria {
  double max_curvature_cap = 1e3;      ///< stop once max|k| * diameter exceeds this
  double min_area_fraction = 1e-3;     ///< stop once area < fraction * initial area
  double max_diameter_collapse = 1e-3; ///< stop once diameter < fraction * initial diameter
  double t_max = std::numeric_limits<double>::infinity();
};

struct FlowParams {
  int n = 2;                     ///< dimension of the Lagrangian in C^n
  double cfl = 0.2;              ///< dt = cfl * (min segment)^2
  int resample_every = 20;       ///< steps between equal-chord resamplings
  double blend_radius_factor = 2.0;
  StopCriteria stop;
  std::size_t max_steps = 50'000'000;

  /// Throws std::invalid_argument when a field is outside its domain.
  void validate() const;
};

struct FlowState {
  DiscreteCurve curve;
  double time = 0.0;
  std::size_t step_count = 0;
};

enum class Termination { ReachedTMax, CurvatureBlowup, AreaCollapse, DiameterCollapse, StepFailure };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view name);

/// Numerical breakdown during a step (dt underflow, non-finite nodes, degenerate spacing).
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Area-lemma bracket for the singular time and a linear extrapolation inside it.
struct SingularTimeEstimate {
  double lower = 0.0;     ///< t + A / (3 pi)
  double upper = 0.0;     ///< t + A / pi
  double estimate = 0.0;  ///< zero crossing of a line fitted to the last 10% of the series
  bool bracketed = false; ///< lower <= estimate <= upper
};

/// Observable columns recorded per snapshot, in file order (after `time`).
const std::vector<std::string>& standard_observable_columns();

struct Trajectory {
  std::vector<FlowState> snapshots;
  ObservableSeries observables;
  Termination termination = Termination::ReachedTMax;
  std::string failure_message;
  std::optional<SingularTimeEstimate> singular_time;
  double initial_area = 0.0;
  double initial_diameter = 0.0;
};

std::vector<PlanarPoint> velocity_field(const DiscreteCurve& curve, int n, double blend_radius);

/// Explicit step size for the current curve.
double stable_dt(const DiscreteCurve& curve, const FlowParams& params);

/// One midpoint (RK2) step followed by symmetry enforcement and, on cadence, resampling.
FlowState step(const FlowState& state, const FlowParams& params);
FlowState step(const FlowState& state, const FlowParams& params, double dt);

/// Steps until a stop criterion fires. Every `record_stride` steps (and at the
/// start and end) a snapshot is stored; observables are evaluated afterwards
/// with the density scale tau = T_est - t.
Trajectory evolve(const FlowState& initial, const FlowParams& params, std::size_t record_stride = 1);

/// `times` and `areas` are parallel. Throws std::invalid_argument if the area does not decrease.
SingularTimeEstimate estimate_singular_time(std::span<const double> times, std::span<const double> areas);
SingularTimeEstimate estimate_singular_time(const ObservableSeries& series, const std::string& column = "area");

/// Fills the standard observable table for a finished trajectory.
ObservableSeries compute_observables(const std::vector<FlowState>& snapshots, int n,
                                     const std::optional<SingularTimeEstimate>& singular_time);

}  // namespace eqflow
