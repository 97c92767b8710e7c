#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fovloc/simulator.hpp"

namespace fovloc {

/// Bad configuration key or value (reported as a usage error by the CLI).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Everything the command-line front end can set. Defaults reproduce the
/// baseline simulation setup: 200 m area, 5 m cells, FOV sensor with a 120
/// degree cone and 0.1 mistake rate, 5 degree bearing noise, 24 s rotations,
/// 1 Hz sampling, 5 m/s, 10 deg/s, max-norm threshold 0.5.
struct RunConfig {
  std::uint64_t seed = 1;
  double area_m = 200.0;
  double cell_m = 5.0;
  std::string sensor = "fov";     // fov | ib | rfb
  std::string policy = "greedy";  // greedy | random
  double alpha_deg = 120.0;
  double mu = 0.1;
  double sigma_deg = 5.0;
  double rotation_time_s = 24.0;
  double rate_hz = 1.0;
  double speed_mps = 5.0;
  double heading_rate_dps = 10.0;
  double threshold = 0.5;
  double timeout_s = 3600.0;
  std::string placement = "uniform";  // uniform | cell
  std::string source;                 // "north,east" fixes the source
  std::size_t trials = 1000;
  std::size_t jobs = 1;
  std::string out = "fovloc_out.csv";
  std::string trajectory_dir;  // per-trial trajectory CSVs when non-empty
  std::string belief_dir;      // per-trial final-belief CSVs when non-empty
  std::string alphas = "120,140,160,180";
  std::string mus = "0.1,0.05,0.01";
  std::string rates = "1,2,3,4,5,7,10,20";
};

/// Sets one field by its key (the names printed by dump_config). Throws
/// ConfigError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads "key = value" lines; blank lines and lines starting with '#' are
/// skipped. Throws ConfigError (with line number) or std::runtime_error when
/// the file cannot be read.
void load_config_file(const std::filesystem::path& path, RunConfig& cfg);

/// Every field as "key=value" lines in a fixed order.
std::string dump_config(const RunConfig& cfg);

/// Comma-separated numbers. Throws ConfigError on an empty list or bad entry.
std::vector<double> parse_number_list(const std::string& text);

/// Builds and validates the per-trial configuration. Throws ConfigError.
TrialConfig to_trial_config(const RunConfig& cfg);

}  // namespace fovloc
