#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqflow/curve.hpp"
#include "eqflow/flow.hpp"

namespace eqflow {

/// Schema problem in a scenario config; `pointer` is the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct Perturbation {
  double amplitude = 0.0;
  std::optional<int> mode;  ///< drawn from the seed when absent
};

struct GeneratorSpec {
  std::string name = "whitney";  ///< whitney | circle | cone_eight
  std::size_t n_nodes = 512;
  double radius = 1.0;       // circle
  double alpha = 0.0;        // cone_eight
  double area_target = 1.0;  // cone_eight
  double margin = 0.0;       // cone_eight
  std::optional<Perturbation> perturbation;
};

struct ScenarioSpec {
  GeneratorSpec generator;
  FlowParams flow;
  std::size_t record_stride = 100;
  std::vector<std::string> observables;  ///< subset of the standard columns, kept in standard order
  std::string out_dir = "run";
};

ScenarioSpec parse_scenario(const nlohmann::json& config);

/// Applies KEY=VALUE where KEY is a dot path ("flow.cfl"). VALUE is parsed as JSON when
/// possible and taken as a plain string otherwise. Missing objects along the path are created.
void apply_override(nlohmann::json& config, const std::string& assignment);

nlohmann::json load_config_file(const std::string& path);

DiscreteCurve build_initial_curve(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace eqflow
