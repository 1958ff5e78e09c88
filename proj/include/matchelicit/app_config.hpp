#pragma once

#include <cstdint>
#include <string>

#include "matchelicit/simulator.hpp"

namespace matchelicit {

// Synthetic dataset parameters (used when no dataset path is given).
struct SyntheticSpec {
  int num_users = 60;
  int num_items = 12;
  int rank = 2;
  double noise_sd = 1.0;
  double range_lo = -10.0;
  double range_hi = 10.0;
  double density = 1.0;
  std::uint64_t seed = 7;
};

// Everything the CLI needs for one run: dataset source, optional filtering,
// simulation settings and the output path. Every field has a default; a JSON
// config file may set any subset and command-line flags override the file.
struct AppConfig {
  std::string dataset_path;  // empty: generate from `synthetic`
  SyntheticSpec synthetic;
  int min_user_ratings = 0;  // filter pass, 0 disables
  int top_items = 0;         // keep most-rated items, 0 keeps all

  // Constraint fields kept separate so r_max can default to "number of
  // users", resolved once the dataset dimensions are known.
  int r_min = 0;
  int r_max = -1;
  int p_min = 1;
  int p_max = 1;

  SimConfig sim;
  std::string output_path = "results.csv";

  MatchConstraints resolve_constraints(int num_users) const;
};

// Parses the documented JSON config schema; unknown keys are rejected.
AppConfig load_app_config(const std::string& path);
AppConfig parse_app_config_json(const std::string& text, const std::string& name);

}  // namespace matchelicit
