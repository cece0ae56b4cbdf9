#include "eqflow/report.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "eqflow/observables.hpp"

namespace eqflow {

Schedule schedule_from_string(const std::string& name) {
  if (name == "dyadic") return Schedule::Dyadic;
  if (name == "area" || name == "area-normalized") return Schedule::AreaNormalized;
  throw std::invalid_argument("unknown schedule '" + name + "' (dyadic, area-normalized)");
}

std::string to_string(Schedule s) { return s == Schedule::Dyadic ? "dyadic" : "area-normalized"; }

namespace {

RescaleEntry measure(const RescaledSnapshot& r, const RescaleOptions& o) {
  RescaleEntry e;
  e.lambda = r.scale;
  e.s = r.rescaled_time;
  e.source_time = r.source_time;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    const LinePairFit fit = line_pair_fit(r.curve, o.r_in, o.r_out);
    e.interline_angle_deg = fit.inter_line_angle() * 180.0 / std::numbers::pi;
    e.residual = fit.residual;
  } catch (const CurveError&) {
    e.interline_angle_deg = e.residual = nan;
  }
  e.multiplicity = multiplicity_estimate(r.curve, o.n, default_tau_grid());
  if (const auto reg = annulus_regularity(r.curve, o.r_in, o.r_out, o.n)) {
    e.sup_k = reg->sup_curvature;
    e.sup_gamma_perp = reg->sup_normal_position;
  } else {
    e.sup_k = e.sup_gamma_perp = nan;
  }
  return e;
}

std::vector<RescaleEntry> central_entries(std::span<const FlowState> snapshots, double singular_time,
                                         const RescaleOptions& options) {
  std::vector<const FlowState*> before;
  for (const auto& s : snapshots) {
    if (s.curve.symmetry() != Symmetry::FigureEight) {
      throw std::invalid_argument("rescale analysis needs a figure-eight trajectory, got " +
                                  std::string(to_string(s.curve.symmetry())));
    }
    if (s.time < singular_time) before.push_back(&s);
  }
  if (before.size() < 8) {
    throw std::invalid_argument("rescale analysis needs at least 8 snapshots before the singular time, got " +
                                std::to_string(before.size()));
  }

  std::vector<RescaleEntry> entries;
  if (options.schedule == Schedule::AreaNormalized) {
    const std::size_t first = before.size() > options.count ? before.size() - options.count : 0;
    for (std::size_t i = first; i < before.size(); ++i) {
      const FlowState& s = *before[i];
      entries.push_back(measure(central_rescale(s, singular_time, area_normalizing_scale(s.curve)), options));
    }
  } else {
    const double target = -1.0 / (3.0 * std::numbers::pi);
    for (std::size_t j = 0; j < options.count; ++j) {
      const double lambda = std::ldexp(1.0, static_cast<int>(j));
      const FlowState* best = before.front();
      double best_gap = std::numeric_limits<double>::infinity();
      for (const FlowState* s : before) {
        const double gap = std::abs(std::log(lambda * lambda * (singular_time - s->time) / -target));
        if (gap < best_gap) {
          best_gap = gap;
          best = s;
        }
      }
      entries.push_back(measure(central_rescale(*best, singular_time, lambda), options));
    }
  }
  return entries;
}

}  // namespace

RescaleReport rescale_trajectory(std::span<const FlowState> snapshots, double singular_time,
                                 const RescaleOptions& options) {
  if (options.count == 0) throw std::invalid_argument("rescale schedule has no entries");
  if (!(options.r_in > 0.0 && options.r_in < options.r_out)) throw std::invalid_argument("need 0 < r_in < r_out");

  RescaleReport report;
  report.singular_time = singular_time;
  report.options = options;
  report.entries = central_entries(snapshots, singular_time, options);

  for (int k : options.type2_k) {
    try {
      const Type2Rescale t2 = type2_rescale(snapshots, singular_time, k, options.n);
      report.type2.push_back({k, t2.snapshot.scale, t2.snapshot.source_time, t2.divergence, t2.singular_fraction});
    } catch (const std::invalid_argument&) {
      // empty window for this k
    }
  }
  return report;
}

RescaleReport rescale_trajectory(std::span<const FlowState> snapshots, const SingularTimeEstimate& estimate,
                                 const RescaleOptions& options) {
  RescaleReport report = rescale_trajectory(snapshots, estimate.estimate, options);
  for (double t : {estimate.lower, estimate.upper}) {
    SensitivityRun run{t, {}, {}};
    try {
      run.entries = central_entries(snapshots, t, options);
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    report.sensitivity.push_back(std::move(run));
  }
  return report;
}

nlohmann::json to_json(const RescaleReport& report) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  auto rows = [&](const std::vector<RescaleEntry>& list) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : list) {
      out.push_back({{"lambda", num(e.lambda)},
                     {"s", num(e.s)},
                     {"source_time", num(e.source_time)},
                     {"interline_angle_deg", num(e.interline_angle_deg)},
                     {"residual", num(e.residual)},
                     {"multiplicity", num(e.multiplicity)},
                     {"sup_k", num(e.sup_k)},
                     {"sup_gamma_perp", num(e.sup_gamma_perp)},
                     {"lambda_z_norm", num(e.lambda_z_norm)}});
    }
    return out;
  };
  nlohmann::json type2 = nlohmann::json::array();
  for (const auto& t : report.type2) {
    type2.push_back({{"k", t.k},
                     {"lambda", num(t.lambda)},
                     {"time", num(t.time)},
                     {"lambda_z_norm", num(t.lambda_z_norm)},
                     {"singular_fraction", num(t.singular_fraction)}});
  }
  nlohmann::json sensitivity = nlohmann::json::array();
  for (const auto& run : report.sensitivity) {
    nlohmann::json item{{"singular_time", run.singular_time}, {"entries", rows(run.entries)}};
    if (!run.error.empty()) item["error"] = run.error;
    sensitivity.push_back(std::move(item));
  }
  return {{"schedule", to_string(report.options.schedule)},
          {"singular_time", report.singular_time},
          {"annulus", {report.options.r_in, report.options.r_out}},
          {"n", report.options.n},
          {"entries", rows(report.entries)},
          {"type2", type2},
          {"sensitivity", sensitivity}};
}

}  // namespace eqflow
