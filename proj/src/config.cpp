#include "eqflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "eqflow/scenarios.hpp"

namespace eqflow {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& ptr, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(ptr + "/" + key, "unknown key");
  }
}

const json& require_object(const json& parent, const std::string& key, const std::string& ptr) {
  if (!parent.contains(key)) throw ConfigError(ptr + "/" + key, "missing required object");
  const json& v = parent.at(key);
  if (!v.is_object()) throw ConfigError(ptr + "/" + key, "expected an object");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& ptr, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ConfigError(ptr + "/" + key, "expected a number");
  return v.get<double>();
}

long long integer(const json& obj, const std::string& key, const std::string& ptr, long long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(ptr + "/" + key, "expected an integer");
  return v.get<long long>();
}

void check(bool ok, const std::string& ptr, const std::string& message) {
  if (!ok) throw ConfigError(ptr, message);
}

GeneratorSpec parse_generator(const json& g) {
  const std::string ptr = "/generator";
  reject_unknown(g, ptr, {"name", "n_nodes", "radius", "alpha", "area_target", "margin", "perturbation"});
  GeneratorSpec spec;
  if (!g.contains("name") || !g.at("name").is_string()) throw ConfigError(ptr + "/name", "expected a generator name");
  spec.name = g.at("name").get<std::string>();
  check(spec.name == "whitney" || spec.name == "circle" || spec.name == "cone_eight", ptr + "/name",
        "unknown generator '" + spec.name + "' (whitney, circle, cone_eight)");

  const long long nodes = integer(g, "n_nodes", ptr, 512);
  check(nodes >= 16 && nodes % 2 == 0, ptr + "/n_nodes", "must be even and >= 16");
  if (spec.name != "circle") check(nodes >= 64, ptr + "/n_nodes", "figure-eight generators need >= 64 nodes");
  spec.n_nodes = static_cast<std::size_t>(nodes);

  spec.radius = number(g, "radius", ptr, 1.0);
  check(spec.radius > 0.0 && std::isfinite(spec.radius), ptr + "/radius", "must be positive");
  spec.alpha = number(g, "alpha", ptr, 0.0);
  spec.area_target = number(g, "area_target", ptr, 1.0);
  spec.margin = number(g, "margin", ptr, 0.0);
  if (spec.name == "cone_eight") {
    check(g.contains("alpha"), ptr + "/alpha", "required for cone_eight");
    check(spec.alpha > 0.0 && spec.alpha < std::numbers::pi, ptr + "/alpha", "must lie in (0, pi)");
    check(spec.area_target > 0.0, ptr + "/area_target", "must be positive");
    const double half = 0.5 * spec.alpha - spec.margin;
    check(half > 0.0 && half < 0.5 * std::numbers::pi, ptr + "/margin", "alpha/2 - margin must lie in (0, pi/2)");
  }

  if (g.contains("perturbation")) {
    const std::string pp = ptr + "/perturbation";
    const json& p = g.at("perturbation");
    check(p.is_object(), pp, "expected an object");
    check(spec.name != "circle", pp, "perturbations apply to figure-eight generators only");
    reject_unknown(p, pp, {"amplitude", "mode"});
    Perturbation pert;
    pert.amplitude = number(p, "amplitude", pp, 0.0);
    check(pert.amplitude >= 0.0 && std::isfinite(pert.amplitude), pp + "/amplitude", "must be >= 0");
    if (p.contains("mode")) {
      const long long m = integer(p, "mode", pp, 1);
      check(m >= 1, pp + "/mode", "must be >= 1");
      pert.mode = static_cast<int>(m);
    }
    spec.perturbation = pert;
  }
  return spec;
}

FlowParams parse_flow(const json& f) {
  const std::string ptr = "/flow";
  reject_unknown(f, ptr, {"n", "cfl", "resample_every", "blend_radius_factor", "max_steps", "t_max",
                          "max_curvature_cap", "min_area_fraction", "max_diameter_collapse"});
  FlowParams p;
  const long long n = integer(f, "n", ptr, p.n);
  check(n >= 2 && n <= 64, ptr + "/n", "must lie in [2, 64]");
  p.n = static_cast<int>(n);
  p.cfl = number(f, "cfl", ptr, p.cfl);
  check(p.cfl > 0.0 && std::isfinite(p.cfl), ptr + "/cfl", "must be positive");
  const long long every = integer(f, "resample_every", ptr, p.resample_every);
  check(every >= 1, ptr + "/resample_every", "must be >= 1");
  p.resample_every = static_cast<int>(every);
  p.blend_radius_factor = number(f, "blend_radius_factor", ptr, p.blend_radius_factor);
  check(p.blend_radius_factor > 0.0, ptr + "/blend_radius_factor", "must be positive");
  const long long steps = integer(f, "max_steps", ptr, static_cast<long long>(p.max_steps));
  check(steps >= 1, ptr + "/max_steps", "must be >= 1");
  p.max_steps = static_cast<std::size_t>(steps);
  p.stop.t_max = number(f, "t_max", ptr, p.stop.t_max);
  check(p.stop.t_max >= 0.0, ptr + "/t_max", "must be >= 0");
  p.stop.max_curvature_cap = number(f, "max_curvature_cap", ptr, p.stop.max_curvature_cap);
  check(p.stop.max_curvature_cap > 0.0, ptr + "/max_curvature_cap", "must be positive");
  p.stop.min_area_fraction = number(f, "min_area_fraction", ptr, p.stop.min_area_fraction);
  check(p.stop.min_area_fraction > 0.0 && p.stop.min_area_fraction < 1.0, ptr + "/min_area_fraction",
        "must lie in (0, 1)");
  p.stop.max_diameter_collapse = number(f, "max_diameter_collapse", ptr, p.stop.max_diameter_collapse);
  check(p.stop.max_diameter_collapse > 0.0, ptr + "/max_diameter_collapse", "must be positive");
  return p;
}

}  // namespace

ScenarioSpec parse_scenario(const json& config) {
  if (!config.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(config, "", {"generator", "flow", "record_stride", "observables", "out_dir"});

  ScenarioSpec spec;
  spec.generator = parse_generator(require_object(config, "generator", ""));
  if (config.contains("flow")) spec.flow = parse_flow(require_object(config, "flow", ""));

  const long long stride = integer(config, "record_stride", "", static_cast<long long>(spec.record_stride));
  check(stride >= 1, "/record_stride", "must be >= 1");
  spec.record_stride = static_cast<std::size_t>(stride);

  const auto& standard = standard_observable_columns();
  if (config.contains("observables")) {
    const json& obs = config.at("observables");
    check(obs.is_array(), "/observables", "expected an array of column names");
    std::set<std::string> wanted;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string ptr = "/observables/" + std::to_string(i);
      check(obs[i].is_string(), ptr, "expected a string");
      const auto name = obs[i].get<std::string>();
      check(std::find(standard.begin(), standard.end(), name) != standard.end(), ptr,
            "unknown observable '" + name + "'");
      wanted.insert(name);
    }
    for (const auto& c : standard) {
      if (wanted.count(c)) spec.observables.push_back(c);
    }
  } else {
    spec.observables = standard;
  }

  if (config.contains("out_dir")) {
    check(config.at("out_dir").is_string(), "/out_dir", "expected a path string");
    spec.out_dir = config.at("out_dir").get<std::string>();
  }
  return spec;
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("", "override '" + assignment + "' is not of the form KEY=VALUE");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);

  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &config;
  std::string ptr;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(ptr, "empty component in override key '" + key + "'");
    ptr += "/" + part;
    if (!node->is_object()) throw ConfigError(ptr, "override path runs through a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  json config = json::parse(in, nullptr, false);
  if (config.is_discarded()) throw ConfigError("", "config file '" + path + "' is not valid JSON");
  return config;
}

DiscreteCurve build_initial_curve(const GeneratorSpec& spec, std::uint64_t seed) {
  DiscreteCurve curve = [&] {
    if (spec.name == "circle") return circle(spec.radius, spec.n_nodes);
    if (spec.name == "cone_eight") return cone_eight(spec.alpha, spec.area_target, spec.n_nodes, spec.margin).curve;
    return whitney(spec.n_nodes);
  }();
  if (spec.perturbation && spec.perturbation->amplitude > 0.0) {
    int mode = spec.perturbation->mode.value_or(0);
    if (mode == 0) {
      std::mt19937_64 rng(seed);
      mode = std::uniform_int_distribution<int>(1, 8)(rng);
    }
    curve = perturb(curve, spec.perturbation->amplitude, mode);
  }
  return curve;
}

}  // namespace eqflow
