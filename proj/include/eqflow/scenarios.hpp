#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eqflow/curve.hpp"

namespace eqflow {

/// Whitney profile (sin u, sin u cos u) / (1 + cos^2 u).
PlanarPoint whitney_point(double u);

/// Whitney figure eight: u = 0 at node 0, u = pi at node N/2, then equal-chord resampled.
DiscreteCurve whitney(std::size_t n_nodes);

/// Origin-centred circle sampled at uniform angles, node 0 at (R, 0).
DiscreteCurve circle(double radius, std::size_t n_nodes);

/// Segment of the line through the origin at `angle`, nodes symmetric about the origin
/// (which is not itself a node).
DiscreteCurve straight_line(double angle, double half_length, std::size_t n_nodes);

/// Barrier profile sin(pi u / alpha)^(-alpha / pi) (cos u, sin u).
PlanarPoint barrier_point(double alpha, double u);

/// Truncated barrier arc on [u_margin, alpha - u_margin] and its antipodal copy.
struct BarrierPair {
  DiscreteCurve arc;
  DiscreteCurve antipodal;
};
BarrierPair barrier_alpha(double alpha, std::size_t n_nodes, double u_margin);

/// Squeezed and scaled Whitney mu * (x0, s * y0) whose cone opening is alpha - 2 margin
/// and whose enclosed area is area_target.
struct ConeEight {
  DiscreteCurve curve;
  double squeeze = 1.0;  ///< s = tan(alpha/2 - margin)
  double scale = 1.0;    ///< mu
};
ConeEight cone_eight(double alpha, double area_target, std::size_t n_nodes, double margin = 0.0);

/// Normal perturbation amplitude * sin(2 pi m i / N) on one lobe, mirrored.
/// Rejects results that leave the figure-eight class.
DiscreteCurve perturb(const DiscreteCurve& curve, double amplitude, int mode);

/// The 16 reference radii used for intersection-count monitoring, scaled to the curve.
std::vector<double> standard_radius_grid(const DiscreteCurve& curve);

}  // namespace eqflow
