#include "eqflow/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace eqflow {

namespace {

constexpr double kPi = std::numbers::pi;

/// Representative of a line-direction difference in [-pi/2, pi/2].
double wrap_half(double d) { return d - kPi * std::round(d / kPi); }

std::vector<double> arc_weights(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t s = 0; s < curve.segment_count(); ++s) {
    const double half = 0.5 * curve.segment_length(s);
    w[s] += half;
    w[curve.next(s)] += half;
  }
  return w;
}

double weighted_density(const DiscreteCurve& curve, int n, PlanarPoint center, double tau,
                        const std::vector<double>* integrand) {
  if (!(tau > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "density scale tau must be positive");
  if (n < 2) throw CurveError(CurveErrorKind::InvalidArgument, "dimension n must be >= 2");
  const auto w = arc_weights(curve);
  const double inv4tau = 1.0 / (4.0 * tau);
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double f = integrand ? (*integrand)[i] : 1.0;
    if (f == 0.0) continue;
    const double r = norm(curve[i]);
    sum += f * std::exp(-norm2(curve[i] - center) * inv4tau) * std::pow(r, n - 1) * w[i];
  }
  return 0.5 * unit_sphere_area(n - 1) * std::pow(4.0 * kPi * tau, -0.5 * n) * sum;
}

}  // namespace

ObservableSeries::ObservableSeries(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void ObservableSeries::append(double time, std::vector<double> values) {
  if (values.size() != columns_.size()) throw std::invalid_argument("observable row width does not match columns");
  if (!times_.empty() && !(time > times_.back())) {
    throw std::invalid_argument("observable times must be strictly increasing");
  }
  times_.push_back(time);
  rows_.push_back(std::move(values));
}

std::optional<std::size_t> ObservableSeries::column_index(const std::string& name) const {
  auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> ObservableSeries::column(const std::string& name) const {
  const auto idx = column_index(name);
  if (!idx) throw std::out_of_range("no observable column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[*idx]);
  return out;
}

void ObservableSeries::set(std::size_t row, const std::string& name, double value) {
  const auto idx = column_index(name);
  if (!idx) throw std::out_of_range("no observable column '" + name + "'");
  rows_.at(row)[*idx] = value;
}

double AngleProfile::min() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (included[i]) m = std::min(m, theta[i]);
  }
  return m;
}

double AngleProfile::max() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (included[i]) m = std::max(m, theta[i]);
  }
  return m;
}

double unit_sphere_area(int k) {
  const double half = 0.5 * (k + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

double enclosed_area(const DiscreteCurve& curve) {
  if (!curve.is_closed()) throw CurveError(CurveErrorKind::Unsupported, "enclosed_area needs a closed curve");
  if (curve.symmetry() == Symmetry::FigureEight) {
    // lobes are traversed in opposite rotational senses, so sum them separately
    const std::size_t half = curve.size() / 2;
    double lobe1 = 0.0, lobe2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) lobe1 += cross(curve[i], curve[i + 1]);
    for (std::size_t i = half; i < curve.size(); ++i) lobe2 += cross(curve[i], curve[curve.next(i)]);
    return 0.5 * (std::abs(lobe1) + std::abs(lobe2));
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) twice += cross(curve[i], curve[curve.next(i)]);
  return 0.5 * std::abs(twice);
}

double lobe_area(const DiscreteCurve& curve) {
  const double a = enclosed_area(curve);
  return curve.symmetry() == Symmetry::FigureEight ? 0.5 * a : a;
}

AngleProfile lagrangian_angle(const DiscreteCurve& curve, int n) {
  if (n < 2) throw CurveError(CurveErrorKind::InvalidArgument, "dimension n must be >= 2");
  const std::size_t size = curve.size();
  const auto frames = compute_frames(curve);

  AngleProfile out;
  out.theta.assign(size, 0.0);
  out.included.assign(size, true);
  std::vector<double> tangent_arg(size), position_arg(size);
  double best_r = -1.0;
  for (std::size_t i = 0; i < size; ++i) {
    if (curve.is_origin_node(i)) {
      out.included[i] = false;
      continue;
    }
    const double r = norm(curve[i]);
    if (r == 0.0) {
      throw CurveError(CurveErrorKind::SymmetryBroken, "lagrangian_angle: node " + std::to_string(i) + " sits at the origin",
                       i);
    }
    tangent_arg[i] = arg(frames[i].tangent);
    position_arg[i] = arg(curve[i]);
    if (r > best_r) {
      best_r = r;
      out.anchor = i;
    }
  }

  const double c = static_cast<double>(n - 1);
  const std::size_t a = out.anchor;
  const double raw = tangent_arg[a] + c * position_arg[a];
  const double shift = wrap_angle(raw) - raw;

  // lift along a run of nodes starting at the anchor
  auto lift = [&](auto next_index, std::size_t steps) {
    double lt = tangent_arg[a];
    double lp = position_arg[a];
    std::size_t prev = a;
    std::size_t i = a;
    for (std::size_t k = 0; k < steps; ++k) {
      i = next_index(i);
      if (!out.included[i]) continue;
      lt += wrap_angle(tangent_arg[i] - tangent_arg[prev]);
      lp += wrap_half(position_arg[i] - position_arg[prev]);
      out.theta[i] = lt + c * lp + shift;
      prev = i;
    }
  };

  out.theta[a] = raw + shift;
  if (curve.is_closed()) {
    lift([&](std::size_t i) { return curve.next(i); }, size - 1);
  } else {
    lift([](std::size_t i) { return i + 1; }, size - 1 - a);
    lift([](std::size_t i) { return i - 1; }, a);
  }
  return out;
}

double gaussian_density(const DiscreteCurve& curve, int n, PlanarPoint center, double tau) {
  return weighted_density(curve, n, center, tau, nullptr);
}

double gaussian_density(const DiscreteCurve& curve, int n, double tau) {
  return gaussian_density(curve, n, PlanarPoint{0.0, 0.0}, tau);
}

double theta_squared_density(const DiscreteCurve& curve, const AngleProfile& angle, int n, double tau) {
  std::vector<double> f(curve.size(), 0.0);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (angle.included[i]) f[i] = angle.theta[i] * angle.theta[i];
  }
  return weighted_density(curve, n, PlanarPoint{0.0, 0.0}, tau, &f);
}

double theta_squared_density(const DiscreteCurve& curve, int n, double tau) {
  return theta_squared_density(curve, lagrangian_angle(curve, n), n, tau);
}

int circle_intersections(const DiscreteCurve& curve, double radius) {
  if (!(radius > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "circle radius must be positive");
  int count = 0;
  for (std::size_t s = 0; s < curve.segment_count(); ++s) {
    const bool a = norm(curve[s]) > radius;
    const bool b = norm(curve[curve.next(s)]) > radius;
    if (a != b) ++count;
  }
  return count;
}

double cone_width(const DiscreteCurve& curve) {
  std::vector<double> dirs;
  dirs.reserve(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.is_origin_node(i) || norm2(curve[i]) == 0.0) continue;
    double d = std::fmod(arg(curve[i]), kPi);
    if (d < 0.0) d += kPi;
    dirs.push_back(d);
  }
  if (dirs.size() < 2) return 0.0;
  std::sort(dirs.begin(), dirs.end());
  double gap = dirs.front() + kPi - dirs.back();
  for (std::size_t k = 1; k < dirs.size(); ++k) gap = std::max(gap, dirs[k] - dirs[k - 1]);
  return std::clamp(kPi - gap, 0.0, kPi);
}

namespace {

struct AngleDerivatives {
  std::vector<double> theta_s;
  std::vector<double> rhs;  // theta_ss + (n-1) <x,T>/|x|^2 theta_s
  std::vector<bool> valid;
};

AngleDerivatives angle_derivatives(const DiscreteCurve& curve, const AngleProfile& angle, int n,
                                   double exclusion_radius) {
  const std::size_t size = curve.size();
  const auto frames = compute_frames(curve);
  AngleDerivatives d{std::vector<double>(size, 0.0), std::vector<double>(size, 0.0), std::vector<bool>(size, false)};
  for (std::size_t i = 0; i < size; ++i) {
    if (!curve.is_closed() && (i == 0 || i + 1 == size)) continue;
    const std::size_t ip = curve.prev(i);
    const std::size_t in = curve.next(i);
    if (!angle.included[i] || !angle.included[ip] || !angle.included[in]) continue;
    const double r2 = norm2(curve[i]);
    if (r2 < exclusion_radius * exclusion_radius) continue;
    const double hm = norm(curve[i] - curve[ip]);
    const double hp = norm(curve[in] - curve[i]);
    // a closed curve can carry a 2 pi jump where the lift wraps around
    const double dp = std::remainder(angle.theta[in] - angle.theta[i], 2.0 * kPi);
    const double dm = std::remainder(angle.theta[i] - angle.theta[ip], 2.0 * kPi);
    const double ts = (dp * hm / hp + dm * hp / hm) / (hm + hp);
    const double tss = 2.0 * (dp / hp - dm / hm) / (hm + hp);
    d.theta_s[i] = ts;
    d.rhs[i] = tss + (n - 1) * dot(curve[i], frames[i].tangent) / r2 * ts;
    d.valid[i] = true;
  }
  return d;
}

}  // namespace

double angle_heat_residual(const DiscreteCurve& earlier, double t_earlier, const DiscreteCurve& later, double t_later,
                           int n, double exclusion_radius) {
  if (earlier.size() != later.size()) {
    throw CurveError(CurveErrorKind::InvalidArgument, "angle_heat_residual needs snapshots with matching node counts");
  }
  const double dt = t_later - t_earlier;
  if (!(dt > 0.0)) throw CurveError(CurveErrorKind::InvalidArgument, "angle_heat_residual needs t_later > t_earlier");

  const auto angle_a = lagrangian_angle(earlier, n);
  const auto angle_b = lagrangian_angle(later, n);
  const auto der_a = angle_derivatives(earlier, angle_a, n, exclusion_radius);
  const auto der_b = angle_derivatives(later, angle_b, n, exclusion_radius);
  const auto frames_a = compute_frames(earlier);
  const auto w = arc_weights(earlier);

  struct Sample {
    double weight, dtheta, rhs, theta_s, r2;
  };
  std::vector<Sample> samples;
  samples.reserve(earlier.size());
  for (std::size_t i = 0; i < earlier.size(); ++i) {
    if (!der_a.valid[i]) continue;
    const PlanarPoint p = earlier[i];
    const PlanarPoint nu = frames_a[i].normal;
    // nearest crossing of the normal line with the later polyline
    double best = std::numeric_limits<double>::infinity();
    std::size_t seg = 0;
    double mu = 0.0;
    for (std::size_t s = 0; s < later.segment_count(); ++s) {
      const PlanarPoint b0 = later[s];
      const PlanarPoint e = later[later.next(s)] - b0;
      const double denom = cross(nu, e);
      if (denom == 0.0) continue;
      const double m = cross(nu, p - b0) / denom;
      if (m < 0.0 || m > 1.0) continue;
      const double lambda = cross(b0 - p, e) / denom;
      if (std::abs(lambda) < best) {
        best = std::abs(lambda);
        seg = s;
        mu = m;
      }
    }
    if (!std::isfinite(best)) continue;
    const std::size_t j0 = seg;
    const std::size_t j1 = later.next(seg);
    if (!der_b.valid[j0] || !der_b.valid[j1]) continue;
    const double theta_b =
        angle_b.theta[j0] + mu * std::remainder(angle_b.theta[j1] - angle_b.theta[j0], 2.0 * kPi);
    const double rhs_b = (1.0 - mu) * der_b.rhs[j0] + mu * der_b.rhs[j1];
    // the two profiles are lifted from independent anchors, so compare on the circle
    samples.push_back({w[i], std::remainder(theta_b - angle_a.theta[i], 2.0 * kPi), 0.5 * (der_a.rhs[i] + rhs_b),
                       der_a.theta_s[i], norm2(p)});
  }
  if (samples.empty()) return 0.0;

  double defect = 0.0, rate = 0.0, scale = 0.0;
  for (const auto& s : samples) {
    const double dtheta = s.dtheta / dt;
    defect += s.weight * (dtheta - s.rhs) * (dtheta - s.rhs);
    rate += s.weight * dtheta * dtheta;
    // 1/|x|^2 is the scale of the drift term; keeps static solutions from dividing 0 by 0
    scale += s.weight * (std::pow(s.theta_s, 4) + 1.0 / (s.r2 * s.r2));
  }
  const double denom = std::max(std::sqrt(rate), std::sqrt(scale));
  if (denom == 0.0) return 0.0;
  return std::sqrt(defect) / denom;
}

}  // namespace eqflow
