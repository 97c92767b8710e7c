#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fovloc/belief.hpp"
#include "fovloc/geometry.hpp"
#include "fovloc/sensors.hpp"

namespace fovloc {

/// Commanded planar velocity (direction east of north, speed) and heading rate.
struct Action {
  double velocity_dir_deg = 0.0;
  double speed_mps = 5.0;
  double heading_rate_dps = 0.0;

  friend bool operator==(const Action&, const Action&) = default;
};

/// Eight velocity directions 0..315 (outer) times heading rates
/// {-rate, 0, +rate} (inner): 24 actions. Argmax ties resolve to the first.
std::vector<Action> fov_action_set(double speed_mps = 5.0, double heading_rate_dps = 10.0);

/// Eight velocity directions with zero heading rate.
std::vector<Action> velocity_action_set(double speed_mps = 5.0);

/// Forward-Euler step of the single-integrator model. No clamping.
UavState propagate(const UavState& x, const Action& u, double dt_s);

/// Clamps the position into [0, area_side_m] on both axes.
UavState clamp_to_area(const UavState& x, double area_side_m);

inline UavState propagate_clamped(const UavState& x, const Action& u, double dt_s,
                                  double area_side_m) {
  return clamp_to_area(propagate(x, u, dt_s), area_side_m);
}

/// H(z) - H(z | b) in nats for an FOV reading taken from `x_next`.
double mutual_information(const GridBelief& b, const FovModel& m, const UavState& x_next);

/// Mutual information between the belief and a bearing reading taken at
/// `position` (heading is irrelevant), with the reading binned into
/// kBearingBins bins.
double bearing_mutual_information(const GridBelief& b, const BearingModel& m,
                                  const SourcePosition& position);

/// Mutual-information score of each action's clamped successor state.
std::vector<double> score_fov_actions(const GridBelief& b, const UavState& x, const FovModel& m,
                                      std::span<const Action> actions, double dt_s,
                                      double area_side_m);

std::vector<double> score_bearing_actions(const GridBelief& b, const UavState& x,
                                          const BearingModel& m, std::span<const Action> actions,
                                          double dt_s, double area_side_m);

/// Index of the first score within 1e-12 of the maximum. Requires a
/// non-empty span.
std::size_t argmax_first(std::span<const double> scores);

struct Selection {
  std::size_t index = 0;
  double score = 0.0;
};

/// Greedy FOV controller over `actions` (normally fov_action_set()).
Selection greedy_select(const GridBelief& b, const UavState& x, const FovModel& m,
                        std::span<const Action> actions, double dt_s, double area_side_m);

/// Greedy instantaneous-bearing controller over `actions` (normally
/// velocity_action_set()).
Selection greedy_select(const GridBelief& b, const UavState& x, const BearingModel& m,
                        std::span<const Action> actions, double dt_s, double area_side_m);

/// Uniform draw over `actions`; consumes exactly one draw from `rng`.
std::size_t random_select(std::span<const Action> actions, Rng& rng);

/// Centers of a `per_side` x `per_side` partition of the area, row-major
/// from the south-west corner.
std::vector<SourcePosition> waypoint_lattice(double area_side_m, std::size_t per_side = 10);

/// Rotate-for-bearing waypoint choice: the candidate whose bearing reading
/// carries the most information about the source. Throws
/// std::invalid_argument on an empty candidate list.
Selection rfb_select_waypoint(const GridBelief& b, const BearingModel& m,
                              std::span<const SourcePosition> candidates);

}  // namespace fovloc
