#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eqflow/planar.hpp"

namespace eqflow {

enum class Symmetry {
  FigureEight,      ///< nodes[N-i] = -nodes[i], nodes[0] = nodes[N/2] = origin
  AntipodalClosed,  ///< nodes[i + N/2] = -nodes[i]
  OpenClamped,      ///< open polyline, endpoints are fixed boundary data
};

std::string_view to_string(Symmetry s);
Symmetry symmetry_from_string(std::string_view name);

enum class CurveErrorKind {
  InvalidSize,
  NonFinite,
  DegenerateSpacing,
  SymmetryBroken,
  Unsupported,
  InvalidArgument,
};

/// Structural or numerical failure on a curve. Carries the offending node when known.
class CurveError : public std::runtime_error {
 public:
  CurveError(CurveErrorKind kind, std::string message, std::optional<std::size_t> node = std::nullopt);

  CurveErrorKind kind() const { return kind_; }
  std::optional<std::size_t> node() const { return node_; }

 private:
  CurveErrorKind kind_;
  std::optional<std::size_t> node_;
};

/// Polyline profile of an equivariant Lagrangian. Immutable value type.
///
/// Closed curves use periodic indexing modulo size(). The constructor checks
/// size, finiteness and that consecutive nodes are distinct; exact antipodal
/// symmetry is a separate contract (see symmetry_defect / enforce_antipodal)
/// so that perturbed inputs can still be represented and repaired.
class DiscreteCurve {
 public:
  static constexpr std::size_t kMinNodes = 16;

  DiscreteCurve(std::vector<PlanarPoint> nodes, Symmetry symmetry);

  std::size_t size() const { return nodes_.size(); }
  Symmetry symmetry() const { return symmetry_; }
  std::span<const PlanarPoint> nodes() const { return nodes_; }
  const PlanarPoint& operator[](std::size_t i) const { return nodes_[i]; }

  bool is_closed() const { return symmetry_ != Symmetry::OpenClamped; }
  bool is_origin_node(std::size_t i) const {
    return symmetry_ == Symmetry::FigureEight && (i == 0 || i == size() / 2);
  }
  bool is_clamped_node(std::size_t i) const {
    return symmetry_ == Symmetry::OpenClamped && (i == 0 || i + 1 == size());
  }

  /// Index of the antipodal partner of node i (closed symmetric curves only).
  std::size_t partner(std::size_t i) const;

  std::size_t next(std::size_t i) const { return i + 1 == size() ? 0 : i + 1; }
  std::size_t prev(std::size_t i) const { return i == 0 ? size() - 1 : i - 1; }

  /// Number of segments: size() for closed curves, size() - 1 for open ones.
  std::size_t segment_count() const { return is_closed() ? size() : size() - 1; }
  /// Length of segment (i, i+1).
  double segment_length(std::size_t i) const;

  double length() const;
  double min_segment() const;
  double mean_spacing() const { return length() / static_cast<double>(segment_count()); }
  double max_radius() const;
  /// Exact for antipodally symmetric curves (2 max |x|); brute force otherwise.
  double diameter() const;
  /// max_i |nodes[partner(i)] + nodes[i]|, plus origin-pin displacement for figure eights.
  double symmetry_defect() const;

  DiscreteCurve with_nodes(std::vector<PlanarPoint> nodes) const { return {std::move(nodes), symmetry_}; }

 private:
  std::vector<PlanarPoint> nodes_;
  Symmetry symmetry_;
};

/// Discrete Frenet data at one node.
struct NodeFrame {
  PlanarPoint tangent;
  PlanarPoint normal;            ///< tangent rotated by +90 degrees
  PlanarPoint curvature_vector;  ///< d^2 x / ds^2
  double arc_weight = 0.0;       ///< half-sum of adjacent segment lengths
};

std::vector<NodeFrame> compute_frames(const DiscreteCurve& curve);

/// (n-1) x^perp / |x|^2 at node `i`, regularized near the origin.
///
/// At pinned origin nodes this is the limit (n-1)/2 k. For 0 < |x| < blend_radius
/// it blends linearly toward that limit with weight |x| / blend_radius.
PlanarPoint singular_term(const DiscreteCurve& curve, std::span<const NodeFrame> frames, std::size_t i, int n,
                          double blend_radius);

DiscreteCurve resample_arclength(const DiscreteCurve& curve, std::size_t n_out);

DiscreteCurve enforce_antipodal(const DiscreteCurve& curve);

/// Segments (i, i+1), (j, j+1) that cross, excluding adjacent pairs and pairs
/// that only meet at a pinned origin node.
struct SegmentCrossing {
  std::size_t first;
  std::size_t second;
  PlanarPoint point;
};
std::vector<SegmentCrossing> self_intersections(const DiscreteCurve& curve);

}  // namespace eqflow
