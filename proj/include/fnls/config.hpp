#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "fnls/grid.hpp"
#include "fnls/params.hpp"

namespace fnls {

// Flat sectioned key = value experiment description. Unknown keys are rejected.
struct ExperimentConfig {
  std::uint64_t seed = 1;

  // [model]
  int dim = 2;
  double s = 0.7;
  std::string kind = "power";
  double exponent = 2.0;
  double mass = 1.0;

  // [grid]
  double half_extent = 1.5;
  int points_per_dim = 256;

  // [solver]
  double gradient_tol = 1e-9;
  double q_tol = 1e-8;
  int max_iterations = 50000;
  bool warm_start = true;
  std::string grid_policy = "fixed";
  double init_width = 0.0625;  // Gaussian width as a fraction of L

  // [dynamics]
  double dt = 1e-3;
  double horizon = 10.0;
  double energy_tol = 1e-6;
  double blowup_factor = 100.0;
  double dt_min = 1e-10;
  int sample_every = 10;
  double virial_R = 0.0;  // 0 disables virial sampling
  double virial_epsilon = 0.5;
  bool boundary_guard = true;
  double guard_threshold = 1e-6;
  double lambda = 1.0;
  std::string ground_state;  // optional FNLS1 snapshot of u_c

  // [sweep]
  std::vector<double> c_list = {0.5, 1.0, 2.0};
  std::vector<double> lambda_list = {0.8, 0.9, 1.0, 1.1, 1.2};

  // [gn]
  int gn_samples = 20;
  double gn_omega = 1.0;

  // [output]
  std::string directory = "out";
  int snapshot_every = 0;

  int threads = 1;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text of the resolved config (every key, fixed order).
std::string canonical_text(const ExperimentConfig& cfg);
nlohmann::json to_json(const ExperimentConfig& cfg);
// FNV-1a 64-bit, hex.
std::string content_hash(const std::string& text);

ModelParams model_params(const ExperimentConfig& cfg, ParamsMode mode = ParamsMode::Variational);
GridPtr make_config_grid(const ExperimentConfig& cfg);

}  // namespace fnls
