#pragma once

#include <cstdint>
#include <string>

#include "oscwell/potential.hpp"

namespace oscwell {

/// One JSON document drives every subcommand; unknown keys are rejected.
struct RunConfig {
  // potential
  std::string family = "tilted_quartic";
  double base_depth = 1.0;
  double tilt_amplitude = 0.1;
  double tilt_phase = 0.0;
  // dynamics
  double sigma = 0.45;
  double epsilon = 0.2;
  double rho = 0.5;
  double rho_hat = 0.3;
  // grids
  std::size_t y_points = 64;
  std::size_t x_points = 2048;
  std::size_t n_max = 8;
  // mc
  std::size_t paths = 1000;
  double dt = 2e-4;
  std::uint64_t seed = 12345;
  double max_time = 400.0;
  unsigned threads = 1;
  // output
  std::string out_dir = "out";

  PotentialModel build_model() const;
  void validate() const;  // throws ConfigError
};

RunConfig default_config();
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text);
std::string config_to_json(const RunConfig& config);
void save_config(const RunConfig& config, const std::string& path);

}  // namespace oscwell
