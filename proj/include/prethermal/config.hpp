#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prethermal/param_map.hpp"

namespace prethermal {

struct GridSpec {
  double alpha_min = 0.1;
  double alpha_max = 10.0;
  int alpha_points = 20;
  double omega_min = 0.1;
  double omega_max = 10.0;
  int omega_points = 20;
  bool include_zero_alpha = false;

  MapGrid grid() const;
  bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
  // lattice
  double v0 = 10.0;
  int m_max = 16;
  double q = 0.0;
  // drive
  double alpha = 3.0;
  double omega = 2.6;
  double phase = 0.0;
  // integrator
  int steps = 0;
  bool verify = false;
  double tolerance = 1e-8;
  // map
  GridSpec grid;
  std::vector<int> bands{0, 2, 4, 6, 8, 10, 12};
  int b_max = 12;
  bool diagnostics = false;
  unsigned workers = 0;
  // bands
  int band_count = 6;
  int q_points = 41;
  // evolve
  double duration_us = 150.0;
  std::string sampling = "stroboscopic";
  int stride = 16;
  int peak_max = 4;
  double bz_window = 1.0;
  int bz_points = 0;  ///< 0: single quasimomentum
  double bz_sigma = 0.5;
  // stability
  int monodromy_steps = 256;
  // fit
  std::string fit_input;
  std::string fit_channel = "value";
  double fit_t_min = 0.0;
  double fit_t_max = 0.0;
  // pge
  double atom_number = 1e5;
  // units
  double recoil_frequency_hz = 0.0;  ///< 0: lithium-7 at 1064 nm
  // output
  std::string out_dir = "out";
  bool svg = false;
  std::uint64_t seed = 12345;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses a YAML document. Unknown keys, wrong types and out-of-range values
/// raise ConfigError with "line:col" of the offending node.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical YAML; parse_config(to_yaml(c)) == c.
std::string to_yaml(const RunConfig& config);

/// FNV-1a 64 of the canonical YAML, hex.
std::string config_hash(const RunConfig& config);

/// "a0:a1:na,w0:w1:nw"
GridSpec parse_grid_flag(const std::string& text);

}  // namespace prethermal
