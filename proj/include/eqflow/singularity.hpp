#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eqflow/curve.hpp"
#include "eqflow/flow.hpp"

namespace eqflow {

struct RescaledSnapshot {
  DiscreteCurve curve;
  double scale = 1.0;          ///< lambda
  double source_time = 0.0;
  double rescaled_time = 0.0;  ///< s = lambda^2 (t - T)
};

/// Parabolic dilation about the origin: nodes times lambda, s = lambda^2 (t - T).
RescaledSnapshot central_rescale(const FlowState& snapshot, double singular_time, double lambda);

/// Dilation that gives the curve unit enclosed area.
double area_normalizing_scale(const DiscreteCurve& curve);

struct AnnulusRegularity {
  double sup_curvature = 0.0;
  double sup_normal_position = 0.0;  ///< sup |<x, nu>|
  std::size_t node_count = 0;
};

/// Suprema over nodes with r_in <= |x| <= r_out. Empty (nullopt) with fewer than 4 nodes there.
std::optional<AnnulusRegularity> annulus_regularity(const DiscreteCurve& curve, double r_in, double r_out, int n);

struct LinePairFit {
  double direction_1 = 0.0;  ///< in [0, pi)
  double direction_2 = 0.0;
  double residual = 0.0;     ///< RMS normal distance / r_out
  bool two_branches = false;
  std::vector<int> branch_assignment;  ///< 0 or 1 inside the annulus, -1 outside

  double inter_line_angle() const;
};

/// Total-least-squares lines through the origin, one per branch. For a figure eight the
/// branches are the two arcs through the origin pins, split at the lobe tips.
LinePairFit line_pair_fit(const DiscreteCurve& curve, double r_in, double r_out);

/// Median over tau_grid of the origin-centred Gaussian density.
double multiplicity_estimate(const DiscreteCurve& curve, int n, std::span<const double> tau_grid);
const std::vector<double>& default_tau_grid();

struct Type2Rescale {
  RescaledSnapshot snapshot;  ///< curve is lambda (x - z), no longer origin-symmetric
  PlanarPoint center;         ///< z_k
  std::size_t node = 0;
  std::size_t snapshot_index = 0;
  double divergence = 0.0;         ///< |lambda_k z_k|
  double singular_fraction = 0.0;  ///< |singular term| / |k| at the centre node
};

/// Hamilton point picking: maximize |k|^2 (T_k - t) over snapshots with t <= T_k, where
/// T_k = T (1 - 1/k). Throws std::invalid_argument when nothing in the window has curvature.
Type2Rescale type2_rescale(std::span<const FlowState> snapshots, double singular_time, int k, int n);

}  // namespace eqflow
