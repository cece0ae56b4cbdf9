#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqflow/curve.hpp"

namespace eqflow {

/// Time-ordered table of named scalar diagnostics.
class ObservableSeries {
 public:
  ObservableSeries() = default;
  explicit ObservableSeries(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  /// Times must be strictly increasing; `values` must match columns().
  void append(double time, std::vector<double> values);

  std::span<const double> times() const { return times_; }
  std::span<const double> row(std::size_t i) const { return rows_[i]; }
  std::optional<std::size_t> column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  void set(std::size_t row, const std::string& name, double value);

 private:
  std::vector<std::string> columns_;
  std::vector<double> times_;
  std::vector<std::vector<double>> rows_;
};

/// Lagrangian angle per node, lifted to one continuous branch.
///
/// Origin nodes carry no value (included[i] == false). The branch is anchored so
/// that the node of largest |x| lies in (-pi, pi], then lifted continuously
/// around the curve. The position angle is lifted as a line direction (mod pi),
/// so the lift stays continuous through the origin crossing the way the angle
/// on the Lagrangian itself does.
struct AngleProfile {
  std::vector<double> theta;
  std::vector<bool> included;
  std::size_t anchor = 0;

  double min() const;
  double max() const;
};

/// Shoelace area |1/2 sum x_i y_{i+1} - x_{i+1} y_i|. Both lobes of a
/// figure eight count with the same sign.
double enclosed_area(const DiscreteCurve& curve);

/// Area of one lobe of a figure eight (half of enclosed_area); the full area otherwise.
double lobe_area(const DiscreteCurve& curve);

AngleProfile lagrangian_angle(const DiscreteCurve& curve, int n);

/// Equivariant Gaussian density against the backward heat kernel of scale tau.
/// Normalized so that a line through the origin has density 1 at center = origin.
double gaussian_density(const DiscreteCurve& curve, int n, PlanarPoint center, double tau);
double gaussian_density(const DiscreteCurve& curve, int n, double tau);

double theta_squared_density(const DiscreteCurve& curve, int n, double tau);
double theta_squared_density(const DiscreteCurve& curve, const AngleProfile& angle, int n, double tau);

/// Sign changes of |x_i| - R along the polyline (a node exactly on the circle counts as inside).
int circle_intersections(const DiscreteCurve& curve, double radius);

/// Width of the smallest double cone through the origin containing the curve, in [0, pi].
double cone_width(const DiscreteCurve& curve);

/// Relative L2 defect of d/dt theta = theta_ss + (n-1) <x,T>/|x|^2 theta_s between two snapshots.
///
/// Nodes of `earlier` are followed along their normals to `later`. Nodes with |x| below
/// `exclusion_radius` (the origin window) are skipped. Normalized by
/// max(||d/dt theta||, ||theta_s^2 + 1/|x|^2||) so that static profiles are scored too.
double angle_heat_residual(const DiscreteCurve& earlier, double t_earlier, const DiscreteCurve& later, double t_later,
                           int n, double exclusion_radius);

/// Area of the unit (k)-sphere in R^{k+1}.
double unit_sphere_area(int k);

}  // namespace eqflow
