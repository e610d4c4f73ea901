#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fusion/core.hpp"
#include "fusion/gc.hpp"

namespace cli {

/// Deserialized and validated run description. Unknown keys anywhere in the
/// document are rejected; dB -> linear conversion happens here and nowhere
/// else.
struct ExperimentConfig {
  // system
  int k = 0;
  int n = 0;
  fusion::PowerMode power_mode = fusion::PowerMode::Tpc;
  double snr_db = 0.0;

  // sensors
  std::string sensor_mode;                // "iid" | "count_pmf" | "joint_pmf"
  double pd = 0.0, pf = 0.0;              // iid
  std::vector<double> pmf_h0, pmf_h1;     // count_pmf / joint_pmf

  // gc
  int nu = 1000;
  std::optional<double> c;                // nullopt = auto

  // mc
  std::uint64_t runs = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;

  // sweep axes (per subcommand, all optional in the schema)
  std::vector<double> gamma_grid;
  std::vector<double> pf_targets;
  std::vector<int> k_list;
  std::vector<int> n_list;
  double target_pf0 = 0.01;
  std::uint64_t channel_draws = 2000;
  std::uint64_t noise_draws = 10000;
  int bins = 40;
  std::string threshold_rule = "approx";  // "approx" | "exact"
  int pf_grid_points = 64;
  double snr_obs_db = 5.0;
  double pf_fixed = 0.05;
  std::vector<int> criteria;

  nlohmann::json raw;                     // resolved document for the sidecar

  double snr_linear() const;
  fusion::SystemConfig system() const;
  fusion::SensorEnsemble ensemble() const;            // at system K
  fusion::SensorEnsemble ensemble_at(int k) const;    // iid mode only
  fusion::GcParams gc_params() const;
};

/// Loads and validates a config file for the given subcommand. Throws
/// std::runtime_error (or fusion errors) with a readable message on any
/// schema or value problem.
ExperimentConfig load_config(const std::string& path, const std::string& command,
                             std::optional<std::uint64_t> seed_override,
                             std::optional<int> nu_override);

/// Defaults used by `validate` when no config file is given.
ExperimentConfig default_validate_config();

}  // namespace cli
