#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fovloc/belief.hpp"
#include "fovloc/geometry.hpp"
#include "fovloc/sensors.hpp"

namespace fovloc {

enum class Policy { greedy, random };

/// Where an unfixed source is drawn: uniformly over the whole area, or
/// uniformly over cell centers.
enum class SourcePlacement { uniform, cell_center };
enum class SensorKind { fov, ib, rfb };

std::string_view to_string(Policy p);
std::string_view to_string(SensorKind k);
std::string_view to_string(SourcePlacement p);

SensorKind sensor_kind(const SensorModel& s);

struct TrialConfig {
  std::uint64_t seed = 0;
  double area_side_m = 200.0;
  double cell_side_m = 5.0;
  SensorModel sensor = FovModel(120.0, 0.1);
  Policy policy = Policy::greedy;
  double sample_rate_hz = 1.0;
  double speed_mps = 5.0;
  double heading_rate_dps = 10.0;
  double maxnorm_threshold = 0.5;
  double timeout_s = 3600.0;
  SourcePlacement placement = SourcePlacement::uniform;
  /// Overrides `placement` when set.
  std::optional<SourcePosition> source;
  bool record_trajectory = false;
  bool record_belief = false;

  /// Throws std::invalid_argument describing the first invalid field.
  void validate() const;
};

using Observation = std::variant<FovObservation, BearingObservation>;

struct TrajectoryPoint {
  double t_s = 0.0;
  UavState state;
  Observation obs;
};

struct TrialResult {
  std::uint64_t seed = 0;
  double localization_time_s = 0.0;  // timeout_s when timed out
  bool timed_out = false;
  double terminal_maxnorm = 0.0;
  double estimate_error_m = 0.0;
  std::size_t steps = 0;  // belief updates performed
  SourcePosition source;
  std::vector<TrajectoryPoint> trajectory;     // when record_trajectory
  std::optional<GridBelief> final_belief;      // when record_belief
};

/// Runs one localization episode from the area center, heading north. The
/// trial generator is seeded with cfg.seed and draws, in order: the source
/// (north then east coordinate, or one cell index; nothing when fixed), then
/// per step the random action (random policy only) and the observation.
///
/// FOV and IB: observation k is taken at t = k / sample_rate after the k-th
/// action; the trial ends once the max-norm reaches the threshold. RFB: the
/// UAV flies to the chosen waypoint at speed_mps, rotates for the sensor's
/// rotation time, then measures. Throws std::invalid_argument for an
/// invalid config before any stepping.
TrialResult run_trial(const TrialConfig& cfg);

struct BatchSummary {
  std::size_t n_trials = 0;
  double mean_s = 0.0;
  double median_s = 0.0;
  double std_s = 0.0;         // sample standard deviation
  double std_error_s = 0.0;   // std_s / sqrt(n)
  double ci95_half_s = 0.0;   // 1.96 * std_error_s
  std::size_t timeouts = 0;   // counted at timeout_s in the statistics
};

BatchSummary summarize(const std::vector<TrialResult>& trials);

struct BatchResult {
  TrialConfig config;
  std::vector<TrialResult> trials;  // indexed by trial, seed = config.seed + i
  BatchSummary summary;
};

/// Runs trials with seeds cfg.seed + 0 .. cfg.seed + n - 1 over `jobs`
/// worker threads. Results do not depend on `jobs`.
BatchResult run_batch(const TrialConfig& cfg, std::size_t n_trials, std::size_t jobs = 1);

struct SweepRow {
  double alpha_deg = 0.0;
  double mu = 0.0;
  double sample_rate_hz = 0.0;
  BatchSummary summary;
};

/// One batch per (alpha, mu) pair, alphas outer. base.sensor must be FOV.
std::vector<SweepRow> sweep_cone_width(const TrialConfig& base, const std::vector<double>& alphas,
                                       const std::vector<double>& mus, std::size_t n_trials,
                                       std::size_t jobs = 1);

/// One batch per sample rate with everything else from `base`.
std::vector<SweepRow> sweep_sample_rate(const TrialConfig& base, const std::vector<double>& rates_hz,
                                        std::size_t n_trials, std::size_t jobs = 1);

// CSV emitters. Column order is fixed; numbers use shortest round-trip form.
void write_trial_csv_header(std::ostream& os);
void write_trial_csv_row(std::ostream& os, const TrialConfig& cfg, const TrialResult& r);
void write_batch_csv(std::ostream& os, const BatchResult& batch);
void write_summary_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// FOV trajectories use the replay log header
/// t_s,uav_north_m,uav_east_m,heading_deg,src_north_m,src_east_m,z; bearing
/// sensors replace the z column with bearing_deg.
void write_trajectory_csv(std::ostream& os, const TrialConfig& cfg, const TrialResult& r);

}  // namespace fovloc
