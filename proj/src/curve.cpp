#include "eqflow/curve.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

namespace eqflow {

namespace {

constexpr double kDegenerateSpacing = 1e-14;

std::string node_message(std::string_view what, std::size_t i) {
  return std::string(what) + " at node " + std::to_string(i);
}

std::string spacing_message(std::size_t segment, double length, double diameter) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "degenerate spacing: segment %zu has length %.3e (curve diameter %.3e)", segment,
                length, diameter);
  return buf;
}

}  // namespace

std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::FigureEight:
      return "FigureEight";
    case Symmetry::AntipodalClosed:
      return "AntipodalClosed";
    case Symmetry::OpenClamped:
      return "OpenClamped";
  }
  return "?";
}

Symmetry symmetry_from_string(std::string_view name) {
  if (name == "FigureEight") return Symmetry::FigureEight;
  if (name == "AntipodalClosed") return Symmetry::AntipodalClosed;
  if (name == "OpenClamped") return Symmetry::OpenClamped;
  throw CurveError(CurveErrorKind::InvalidArgument, "unknown symmetry '" + std::string(name) + "'");
}

CurveError::CurveError(CurveErrorKind kind, std::string message, std::optional<std::size_t> node)
    : std::runtime_error(std::move(message)), kind_(kind), node_(node) {}

DiscreteCurve::DiscreteCurve(std::vector<PlanarPoint> nodes, Symmetry symmetry)
    : nodes_(std::move(nodes)), symmetry_(symmetry) {
  const std::size_t n = nodes_.size();
  if (n < kMinNodes) {
    throw CurveError(CurveErrorKind::InvalidSize,
                     "curve needs at least " + std::to_string(kMinNodes) + " nodes, got " + std::to_string(n));
  }
  if (symmetry_ != Symmetry::OpenClamped && n % 2 != 0) {
    throw CurveError(CurveErrorKind::InvalidSize, "closed symmetric curve needs an even node count, got " +
                                                      std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_finite(nodes_[i])) throw CurveError(CurveErrorKind::NonFinite, node_message("non-finite node", i), i);
  }
  for (std::size_t i = 0; i < segment_count(); ++i) {
    if (!(segment_length(i) > 0.0)) {
      throw CurveError(CurveErrorKind::DegenerateSpacing, node_message("zero-length segment", i), i);
    }
  }
}

std::size_t DiscreteCurve::partner(std::size_t i) const {
  const std::size_t n = size();
  switch (symmetry_) {
    case Symmetry::FigureEight:
      return i == 0 ? 0 : n - i;
    case Symmetry::AntipodalClosed:
      return (i + n / 2) % n;
    case Symmetry::OpenClamped:
      break;
  }
  throw CurveError(CurveErrorKind::Unsupported, "open curves have no antipodal pairing");
}

double DiscreteCurve::segment_length(std::size_t i) const {
  const std::size_t j = i + 1 == size() ? 0 : i + 1;
  return norm(nodes_[j] - nodes_[i]);
}

double DiscreteCurve::length() const {
  double total = 0.0;
  for (std::size_t i = 0; i < segment_count(); ++i) total += segment_length(i);
  return total;
}

double DiscreteCurve::min_segment() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < segment_count(); ++i) m = std::min(m, segment_length(i));
  return m;
}

double DiscreteCurve::max_radius() const {
  double m = 0.0;
  for (const auto& p : nodes_) m = std::max(m, norm(p));
  return m;
}

double DiscreteCurve::diameter() const {
  if (symmetry_ != Symmetry::OpenClamped) return 2.0 * max_radius();
  double d2 = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) d2 = std::max(d2, norm2(nodes_[i] - nodes_[j]));
  }
  return std::sqrt(d2);
}

double DiscreteCurve::symmetry_defect() const {
  if (symmetry_ == Symmetry::OpenClamped) return 0.0;
  double defect = 0.0;
  for (std::size_t i = 0; i < size(); ++i) defect = std::max(defect, norm(nodes_[i] + nodes_[partner(i)]));
  if (symmetry_ == Symmetry::FigureEight) {
    defect = std::max({defect, norm(nodes_[0]), norm(nodes_[size() / 2])});
  }
  return defect;
}

std::vector<NodeFrame> compute_frames(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  const double floor = kDegenerateSpacing * std::max(curve.diameter(), std::numeric_limits<double>::min());
  std::vector<NodeFrame> frames(n);

  // unit direction and length of segment (i, i+1)
  std::vector<PlanarPoint> dir(curve.segment_count());
  std::vector<double> len(curve.segment_count());
  for (std::size_t i = 0; i < curve.segment_count(); ++i) {
    const PlanarPoint d = curve[curve.next(i)] - curve[i];
    len[i] = norm(d);
    if (!(len[i] > floor)) {
      throw CurveError(CurveErrorKind::DegenerateSpacing,
                       spacing_message(i, len[i], curve.diameter()), i);
    }
    dir[i] = d / len[i];
  }

  for (std::size_t i = 0; i < n; ++i) {
    NodeFrame& f = frames[i];
    if (curve.is_clamped_node(i)) {
      const std::size_t s = i == 0 ? 0 : i - 1;
      f.tangent = dir[s];
      f.normal = perp(f.tangent);
      f.curvature_vector = {0.0, 0.0};
      f.arc_weight = 0.5 * len[s];
      continue;
    }
    const std::size_t sp = curve.prev(i);  // segment (i-1, i)
    const PlanarPoint sum = dir[sp] + dir[i];
    const double sum_norm = norm(sum);
    if (!(sum_norm > 1e-12)) {
      throw CurveError(CurveErrorKind::DegenerateSpacing, node_message("polyline reverses direction", i), i);
    }
    f.tangent = sum / sum_norm;
    f.normal = perp(f.tangent);
    f.curvature_vector = (dir[i] - dir[sp]) * (2.0 / (len[sp] + len[i]));
    f.arc_weight = 0.5 * (len[sp] + len[i]);
  }
  return frames;
}

PlanarPoint singular_term(const DiscreteCurve& curve, std::span<const NodeFrame> frames, std::size_t i, int n,
                          double blend_radius) {
  if (n < 2) throw CurveError(CurveErrorKind::InvalidArgument, "dimension n must be >= 2");
  if (!(blend_radius > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "blend_radius must be positive");
  const double c = static_cast<double>(n - 1);
  const NodeFrame& f = frames[i];
  const PlanarPoint limit = f.curvature_vector * (0.5 * c);
  if (curve.is_origin_node(i)) return limit;

  const PlanarPoint& x = curve[i];
  const double r2 = norm2(x);
  if (r2 == 0.0) {
    throw CurveError(CurveErrorKind::SymmetryBroken, node_message("curve passes through the origin off the pinned set", i),
                     i);
  }
  const PlanarPoint exact = f.normal * (c * dot(x, f.normal) / r2);
  const double r = std::sqrt(r2);
  if (r >= blend_radius) return exact;
  const double w = r / blend_radius;
  return exact * w + limit * (1.0 - w);
}

namespace {

struct PathCursor {
  std::size_t segment = 0;
  double param = 0.0;  // in [0, 1] along the segment
  PlanarPoint point;
};

/// Walks forward along `path` from `from` to the first point at Euclidean distance `chord`.
/// Returns nullopt when the end of the path is reached first.
std::optional<PathCursor> advance_chord(std::span<const PlanarPoint> path, const PathCursor& from, double chord) {
  const double c2 = chord * chord;
  for (std::size_t s = from.segment; s + 1 < path.size(); ++s) {
    const PlanarPoint& a = path[s];
    const PlanarPoint& b = path[s + 1];
    if (norm2(b - from.point) < c2) continue;
    const PlanarPoint ab = b - a;
    const PlanarPoint ap = a - from.point;
    const double qa = norm2(ab);
    const double qb = 2.0 * dot(ap, ab);
    const double qc = norm2(ap) - c2;
    const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
    double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
    t = std::clamp(t, s == from.segment ? from.param : 0.0, 1.0);
    return PathCursor{s, t, a + ab * t};
  }
  return std::nullopt;
}

/// Places `chords` equal chords along `path`, first and last path points fixed.
/// Returns the `chords - 1` interior points.
std::vector<PlanarPoint> equal_chord_points(std::span<const PlanarPoint> path, std::size_t chords) {
  double arc = 0.0;
  for (std::size_t s = 0; s + 1 < path.size(); ++s) arc += norm(path[s + 1] - path[s]);
  const PlanarPoint end = path.back();

  auto march = [&](double chord, std::vector<PlanarPoint>* out) -> double {
    PathCursor cur{0, 0.0, path.front()};
    for (std::size_t k = 1; k < chords; ++k) {
      auto next = advance_chord(path, cur, chord);
      if (!next) return -chord;
      cur = *next;
      if (out) out->push_back(cur.point);
    }
    return norm(end - cur.point) - chord;
  };

  double hi = arc / static_cast<double>(chords);
  double lo = 0.5 * hi;
  double g_lo = march(lo, nullptr);
  while (g_lo <= 0.0) {
    lo *= 0.5;
    g_lo = march(lo, nullptr);
  }
  double g_hi = march(hi, nullptr);
  double chord = hi;
  if (g_hi < 0.0) {
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a); };
    auto [a, b] = boost::math::tools::toms748_solve([&](double c) { return march(c, nullptr); }, lo, hi, g_lo, g_hi,
                                                    tol, iters);
    // the smaller end keeps the last marched point strictly before the path end
    chord = march(a, nullptr) >= 0.0 ? a : b;
  }
  std::vector<PlanarPoint> out;
  out.reserve(chords - 1);
  march(chord, &out);
  if (out.size() != chords - 1) {
    throw CurveError(CurveErrorKind::DegenerateSpacing, "equal-chord resampling failed to place all nodes");
  }
  return out;
}

}  // namespace

DiscreteCurve resample_arclength(const DiscreteCurve& curve, std::size_t n_out) {
  if (n_out < DiscreteCurve::kMinNodes) {
    throw CurveError(CurveErrorKind::InvalidSize, "resample target must be >= " + std::to_string(DiscreteCurve::kMinNodes));
  }
  if (n_out % 2 != 0) throw CurveError(CurveErrorKind::InvalidSize, "resample target must be even");

  const std::size_t n = curve.size();
  const auto nodes = curve.nodes();
  std::vector<PlanarPoint> out(n_out);

  switch (curve.symmetry()) {
    case Symmetry::FigureEight: {
      const std::vector<PlanarPoint> half(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(n / 2 + 1));
      const auto interior = equal_chord_points(half, n_out / 2);
      out[0] = {0.0, 0.0};
      out[n_out / 2] = {0.0, 0.0};
      for (std::size_t j = 1; j < n_out / 2; ++j) {
        out[j] = interior[j - 1];
        out[n_out - j] = -interior[j - 1];
      }
      break;
    }
    case Symmetry::AntipodalClosed: {
      std::vector<PlanarPoint> half(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(n / 2));
      half.push_back(-nodes[0]);
      const auto interior = equal_chord_points(half, n_out / 2);
      out[0] = nodes[0];
      out[n_out / 2] = -nodes[0];
      for (std::size_t j = 1; j < n_out / 2; ++j) {
        out[j] = interior[j - 1];
        out[j + n_out / 2] = -interior[j - 1];
      }
      break;
    }
    case Symmetry::OpenClamped: {
      const auto interior = equal_chord_points(nodes, n_out - 1);
      out.front() = nodes.front();
      out.back() = nodes.back();
      std::copy(interior.begin(), interior.end(), out.begin() + 1);
      break;
    }
  }
  return curve.with_nodes(std::move(out));
}

DiscreteCurve enforce_antipodal(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<PlanarPoint> out(curve.nodes().begin(), curve.nodes().end());
  switch (curve.symmetry()) {
    case Symmetry::FigureEight:
      out[0] = {0.0, 0.0};
      out[n / 2] = {0.0, 0.0};
      for (std::size_t i = 1; i < n / 2; ++i) {
        const PlanarPoint a = (out[i] - out[n - i]) * 0.5;
        out[i] = a;
        out[n - i] = -a;
      }
      break;
    case Symmetry::AntipodalClosed:
      for (std::size_t i = 0; i < n / 2; ++i) {
        const PlanarPoint a = (out[i] - out[i + n / 2]) * 0.5;
        out[i] = a;
        out[i + n / 2] = -a;
      }
      break;
    case Symmetry::OpenClamped:
      throw CurveError(CurveErrorKind::Unsupported, "enforce_antipodal needs a closed symmetric curve");
  }
  return curve.with_nodes(std::move(out));
}

std::vector<SegmentCrossing> self_intersections(const DiscreteCurve& curve) {
  const std::size_t segs = curve.segment_count();
  const std::size_t n = curve.size();
  struct Box {
    double x0, x1, y0, y1;
  };
  std::vector<Box> boxes(segs);
  for (std::size_t i = 0; i < segs; ++i) {
    const PlanarPoint& a = curve[i];
    const PlanarPoint& b = curve[curve.next(i)];
    boxes[i] = {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
  }
  auto touches_origin_pin = [&](std::size_t s) {
    return curve.is_origin_node(s) || curve.is_origin_node(curve.next(s));
  };

  std::vector<SegmentCrossing> found;
  for (std::size_t i = 0; i < segs; ++i) {
    for (std::size_t j = i + 2; j < segs; ++j) {
      if (curve.is_closed() && i == 0 && j + 1 == n) continue;  // adjacent through the wrap
      // the transversal crossing through the pinned origin nodes is part of the figure-eight contract
      if (touches_origin_pin(i) && touches_origin_pin(j)) continue;
      if (boxes[i].x1 < boxes[j].x0 || boxes[j].x1 < boxes[i].x0 || boxes[i].y1 < boxes[j].y0 ||
          boxes[j].y1 < boxes[i].y0) {
        continue;
      }
      const PlanarPoint p = curve[i];
      const PlanarPoint r = curve[curve.next(i)] - p;
      const PlanarPoint q = curve[j];
      const PlanarPoint s = curve[curve.next(j)] - q;
      const double denom = cross(r, s);
      if (denom == 0.0) continue;
      const double t = cross(q - p, s) / denom;
      const double u = cross(q - p, r) / denom;
      if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
      found.push_back({i, j, p + r * t});
    }
  }
  return found;
}

}  // namespace eqflow
