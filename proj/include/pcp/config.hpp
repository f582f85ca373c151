#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcp/model.hpp"

namespace pcp {

// Parsed experiment description. Every model/numerics field is materialized
// here with its default so the emitted manifest can echo the full effective
// configuration, not just the keys the user wrote.
struct ExperimentConfig {
  int schema_version = 1;

  // model block
  int dimension = 1;
  std::string intensity = "lebesgue";  // lebesgue | exp_weight | bump
  double intensity_scale = 1.0;
  std::vector<double> bump_center;
  double bump_radius = 1.0;
  double bump_amplitude = 1.0;
  std::string cluster = "product_gaussian";
  // product_gaussian | iid_points | per_size_density | dirac_offsets
  std::vector<double> size_probs = {0.0, 1.0};
  double sigma = 1.0;
  std::string base = "gaussian";  // iid_points base: gaussian | heavy_tail
  double base_param = 1.0;
  std::vector<double> sigma_n;
  std::vector<std::vector<std::vector<double>>> offsets;  // [size][pt][coord]
  Numerics numerics;

  // experiment block, kept raw: each subcommand reads its own parameters
  nlohmann::json experiment = nlohmann::json::object();

  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

// Parse + schema-validate. Unknown keys inside the model/numerics blocks and
// malformed values raise std::runtime_error with a field-path diagnostic.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

IntensityModel build_intensity(const ExperimentConfig& cfg);
ClusterLaw build_cluster_law(const ExperimentConfig& cfg);
ClusterProcessModel build_model(const ExperimentConfig& cfg);

// Full effective configuration (defaults included) for the result manifest.
nlohmann::json echo_config(const ExperimentConfig& cfg);

}  // namespace pcp
