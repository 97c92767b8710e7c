#include "fovloc/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fovloc {

namespace {

// Bearing scores skip cells lighter than this; across a whole grid the
// neglected terms stay below 1e-13 nats.
constexpr double kNegligibleWeight = 1e-20;

// Scores this close count as tied. Once every successor is uninformative the
// scores differ only by rounding, and the fixed action order must decide.
constexpr double kScoreTieTol = 1e-12;

// Absolute bearing from `from` to every cell center; NaN marks a cell center
// coinciding with `from`.
void cell_bearings(const Grid& grid, double north_m, double east_m, std::vector<double>& out) {
  const auto centers = grid.centers();
  out.resize(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double dn = centers[i].north_m - north_m;
    const double de = centers[i].east_m - east_m;
    out[i] = std::hypot(dn, de) < kCoincidentTolM ? std::numeric_limits<double>::quiet_NaN()
                                                   : bearing_from_offset(dn, de);
  }
}

// Information written as the expected divergence of each cell's reading
// distribution from the predictive one. Cells fall into three groups by
// P(z = 1), so only the group masses are needed. A point mass scores
// exactly zero in this form.
double fov_mi_from_bearings(std::span<const double> w, std::span<const double> bearings,
                            double heading_deg, const FovModel& m) {
  std::array<double, 3> q{};
  std::array<double, 3> mass{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const double rel = std::isnan(bearings[i]) ? 0.0 : relative_from_bearing(bearings[i], heading_deg);
    const double p = fov_prob_z1(m, rel);
    const std::size_t g = p == 0.5 ? 1 : (p > 0.5 ? 0 : 2);
    q[g] = p;
    mass[g] += w[i];
  }
  const double p1 = mass[0] * q[0] + mass[1] * q[1] + mass[2] * q[2];
  double info = 0.0;
  for (std::size_t g = 0; g < 3; ++g) {
    if (mass[g] == 0.0) continue;
    if (q[g] > 0.0) info += mass[g] * q[g] * std::log(q[g] / p1);
    if (q[g] < 1.0) info += mass[g] * (1.0 - q[g]) * std::log((1.0 - q[g]) / (1.0 - p1));
  }
  return std::clamp(info, 0.0, std::log(2.0));
}

double bearing_mi_from_bearings(std::span<const double> w, std::span<const double> bearings,
                                const BearingModel& m) {
  // first pass: reading distribution per cell and the predictive marginal
  std::vector<std::pair<std::size_t, BearingBinWindow>> windows;
  windows.reserve(w.size());
  std::array<double, kBearingBins> marginal{};
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < kNegligibleWeight) continue;
    BearingBinWindow q;
    if (std::isnan(bearings[i])) {
      // co-located cell: reading is uniform over the circle
      q.count = kBearingBins;
      q.probs.fill(1.0 / kBearingBins);
    } else {
      q = bearing_bin_window(m, bearings[i]);
    }
    for (int j = 0; j < q.count; ++j) marginal[(q.first_bin + j) % kBearingBins] += w[i] * q.probs[j];
    windows.emplace_back(i, q);
  }
  std::array<double, kBearingBins> log_marginal{};
  for (int k = 0; k < kBearingBins; ++k) log_marginal[k] = marginal[k] > 0.0 ? std::log(marginal[k]) : 0.0;

  // second pass: expected divergence of each cell's readings from the marginal
  double info = 0.0;
  for (const auto& [i, q] : windows) {
    double d = 0.0;
    for (int j = 0; j < q.count; ++j) {
      const double p = q.probs[j];
      if (p > 0.0) d += p * (std::log(p) - log_marginal[(q.first_bin + j) % kBearingBins]);
    }
    info += w[i] * d;
  }
  return std::max(info, 0.0);
}

}  // namespace

std::vector<Action> fov_action_set(double speed_mps, double heading_rate_dps) {
  std::vector<Action> actions;
  actions.reserve(24);
  for (int d = 0; d < 8; ++d) {
    for (double rate : {-heading_rate_dps, 0.0, heading_rate_dps}) {
      actions.push_back({45.0 * d, speed_mps, rate});
    }
  }
  return actions;
}

std::vector<Action> velocity_action_set(double speed_mps) {
  std::vector<Action> actions;
  actions.reserve(8);
  for (int d = 0; d < 8; ++d) actions.push_back({45.0 * d, speed_mps, 0.0});
  return actions;
}

UavState propagate(const UavState& x, const Action& u, double dt_s) {
  if (!(dt_s > 0.0)) throw std::invalid_argument("time step must be positive");
  const double dir = u.velocity_dir_deg * kDegToRad;
  const double step = u.speed_mps * dt_s;
  return UavState(x.north_m() + step * std::cos(dir), x.east_m() + step * std::sin(dir),
                  x.heading_deg() + u.heading_rate_dps * dt_s);
}

UavState clamp_to_area(const UavState& x, double area_side_m) {
  UavState out = x;
  out.set_position(std::clamp(x.north_m(), 0.0, area_side_m),
                   std::clamp(x.east_m(), 0.0, area_side_m));
  return out;
}

double mutual_information(const GridBelief& b, const FovModel& m, const UavState& x_next) {
  std::vector<double> bearings;
  cell_bearings(b.grid(), x_next.north_m(), x_next.east_m(), bearings);
  return fov_mi_from_bearings(b.weights(), bearings, x_next.heading_deg(), m);
}

double bearing_mutual_information(const GridBelief& b, const BearingModel& m,
                                  const SourcePosition& position) {
  std::vector<double> bearings;
  cell_bearings(b.grid(), position.north_m, position.east_m, bearings);
  return bearing_mi_from_bearings(b.weights(), bearings, m);
}

std::vector<double> score_fov_actions(const GridBelief& b, const UavState& x, const FovModel& m,
                                      std::span<const Action> actions, double dt_s,
                                      double area_side_m) {
  std::vector<double> scores;
  scores.reserve(actions.size());
  std::vector<double> bearings;
  bool have_bearings = false;
  UavState last;
  for (const Action& u : actions) {
    const UavState next = propagate_clamped(x, u, dt_s, area_side_m);
    // actions differing only in heading rate share the successor position
    if (!have_bearings || next.north_m() != last.north_m() || next.east_m() != last.east_m()) {
      cell_bearings(b.grid(), next.north_m(), next.east_m(), bearings);
      have_bearings = true;
      last = next;
    }
    scores.push_back(fov_mi_from_bearings(b.weights(), bearings, next.heading_deg(), m));
  }
  return scores;
}

std::vector<double> score_bearing_actions(const GridBelief& b, const UavState& x,
                                          const BearingModel& m, std::span<const Action> actions,
                                          double dt_s, double area_side_m) {
  std::vector<double> scores;
  scores.reserve(actions.size());
  for (const Action& u : actions) {
    const UavState next = propagate_clamped(x, u, dt_s, area_side_m);
    scores.push_back(bearing_mutual_information(b, m, {next.north_m(), next.east_m()}));
  }
  return scores;
}

std::size_t argmax_first(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("argmax of an empty score list");
  const double best = *std::max_element(scores.begin(), scores.end());
  std::size_t i = 0;
  while (scores[i] < best - kScoreTieTol) ++i;
  return i;
}

Selection greedy_select(const GridBelief& b, const UavState& x, const FovModel& m,
                        std::span<const Action> actions, double dt_s, double area_side_m) {
  const auto scores = score_fov_actions(b, x, m, actions, dt_s, area_side_m);
  const std::size_t i = argmax_first(scores);
  return {i, scores[i]};
}

Selection greedy_select(const GridBelief& b, const UavState& x, const BearingModel& m,
                        std::span<const Action> actions, double dt_s, double area_side_m) {
  const auto scores = score_bearing_actions(b, x, m, actions, dt_s, area_side_m);
  const std::size_t i = argmax_first(scores);
  return {i, scores[i]};
}

std::size_t random_select(std::span<const Action> actions, Rng& rng) {
  if (actions.empty()) throw std::invalid_argument("empty action set");
  std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
  return pick(rng);
}

std::vector<SourcePosition> waypoint_lattice(double area_side_m, std::size_t per_side) {
  if (per_side == 0) throw std::invalid_argument("lattice needs at least one point per side");
  const double spacing = area_side_m / static_cast<double>(per_side);
  std::vector<SourcePosition> out;
  out.reserve(per_side * per_side);
  for (std::size_t r = 0; r < per_side; ++r) {
    for (std::size_t c = 0; c < per_side; ++c) {
      out.push_back({(static_cast<double>(r) + 0.5) * spacing,
                     (static_cast<double>(c) + 0.5) * spacing});
    }
  }
  return out;
}

Selection rfb_select_waypoint(const GridBelief& b, const BearingModel& m,
                              std::span<const SourcePosition> candidates) {
  if (candidates.empty()) throw std::invalid_argument("no candidate waypoints");
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(bearing_mutual_information(b, m, c));
  const std::size_t i = argmax_first(scores);
  return {i, scores[i]};
}

}  // namespace fovloc
