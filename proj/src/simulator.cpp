#include "fovloc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "fovloc/planner.hpp"

namespace fovloc {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::greedy:
      return "greedy";
    case Policy::random:
      return "random";
  }
  return "?";
}

std::string_view to_string(SensorKind k) {
  switch (k) {
    case SensorKind::fov:
      return "fov";
    case SensorKind::ib:
      return "ib";
    case SensorKind::rfb:
      return "rfb";
  }
  return "?";
}

std::string_view to_string(SourcePlacement p) {
  switch (p) {
    case SourcePlacement::uniform:
      return "uniform";
    case SourcePlacement::cell_center:
      return "cell";
  }
  return "?";
}

SensorKind sensor_kind(const SensorModel& s) {
  if (std::holds_alternative<FovModel>(s)) return SensorKind::fov;
  return std::get<BearingModel>(s).rotates() ? SensorKind::rfb : SensorKind::ib;
}

void TrialConfig::validate() const {
  const Grid grid(area_side_m, cell_side_m);  // throws on bad dimensions
  const double n2 = static_cast<double>(grid.n_cells());
  if (!(maxnorm_threshold > 1.0 / n2 && maxnorm_threshold <= 1.0)) {
    throw std::invalid_argument("max-norm threshold must lie in (1/n^2, 1]");
  }
  if (!(timeout_s > 0.0) || !std::isfinite(timeout_s)) {
    throw std::invalid_argument("timeout must be positive");
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw std::invalid_argument("sample rate must be positive");
  }
  if (!(speed_mps > 0.0) || !std::isfinite(speed_mps)) {
    throw std::invalid_argument("speed must be positive");
  }
  if (!(heading_rate_dps >= 0.0) || !std::isfinite(heading_rate_dps)) {
    throw std::invalid_argument("heading rate must be non-negative");
  }
  if (sensor_kind(sensor) == SensorKind::rfb && policy != Policy::greedy) {
    throw std::invalid_argument("rotate-for-bearing supports the greedy policy only");
  }
  if (source) {
    if (!std::isfinite(source->north_m) || !std::isfinite(source->east_m) ||
        source->north_m < 0.0 || source->north_m > area_side_m || source->east_m < 0.0 ||
        source->east_m > area_side_m) {
      throw std::invalid_argument("fixed source must lie inside the search area");
    }
  }
}

namespace {

SourcePosition place_source(const TrialConfig& cfg, const Grid& grid, Rng& rng) {
  if (cfg.source) return *cfg.source;
  if (cfg.placement == SourcePlacement::cell_center) {
    std::uniform_int_distribution<std::size_t> cell(0, grid.n_cells() - 1);
    return grid.center(cell(rng));
  }
  std::uniform_real_distribution<double> coord(0.0, cfg.area_side_m);
  const double north = coord(rng);
  const double east = coord(rng);
  return {north, east};
}

void finish(TrialResult& r, const GridBelief& b, bool keep_belief) {
  if (keep_belief) r.final_belief = b;
  r.terminal_maxnorm = max_norm(b);
  const SourcePosition est = map_estimate(b);
  r.estimate_error_m = std::hypot(est.north_m - r.source.north_m, est.east_m - r.source.east_m);
}

BearingObservation sample_bearing_or_uniform(const BearingModel& m, const UavState& x,
                                             const SourcePosition& s, Rng& rng) {
  if (distance_m(x, s) < kCoincidentTolM) {
    // directly overhead: no bearing information
    std::uniform_real_distribution<double> any(0.0, 360.0);
    return {wrap_360(any(rng))};
  }
  return bearing_sample(m, x, s, rng);
}

TrialResult run_stepped(const TrialConfig& cfg, Rng& rng, TrialResult r, GridBelief b) {
  const double dt = 1.0 / cfg.sample_rate_hz;
  const auto max_steps =
      static_cast<std::size_t>(std::floor(cfg.timeout_s * cfg.sample_rate_hz + 1e-9));
  const bool is_fov = std::holds_alternative<FovModel>(cfg.sensor);
  const std::vector<Action> actions =
      (is_fov || cfg.policy == Policy::random)
          ? fov_action_set(cfg.speed_mps, cfg.heading_rate_dps)
          : velocity_action_set(cfg.speed_mps);

  UavState x(cfg.area_side_m / 2.0, cfg.area_side_m / 2.0, 0.0);
  for (std::size_t k = 1; k <= max_steps; ++k) {
    std::size_t choice = 0;
    if (cfg.policy == Policy::random) {
      choice = random_select(actions, rng);
    } else if (is_fov) {
      choice = greedy_select(b, x, std::get<FovModel>(cfg.sensor), actions, dt, cfg.area_side_m).index;
    } else {
      choice =
          greedy_select(b, x, std::get<BearingModel>(cfg.sensor), actions, dt, cfg.area_side_m).index;
    }
    x = propagate_clamped(x, actions[choice], dt, cfg.area_side_m);

    Observation obs;
    if (is_fov) {
      const auto& m = std::get<FovModel>(cfg.sensor);
      const FovObservation z = fov_sample(m, x, r.source, rng);
      b = bayes_update(b, m, x, z);
      obs = z;
    } else {
      const auto& m = std::get<BearingModel>(cfg.sensor);
      const BearingObservation z = sample_bearing_or_uniform(m, x, r.source, rng);
      b = bayes_update(b, m, x, z);
      obs = z;
    }
    r.steps = k;
    const double t = static_cast<double>(k) / cfg.sample_rate_hz;
    if (cfg.record_trajectory) r.trajectory.push_back({t, x, obs});
    if (max_norm(b) >= cfg.maxnorm_threshold) {
      r.localization_time_s = t;
      finish(r, b, cfg.record_belief);
      return r;
    }
  }
  r.timed_out = true;
  r.localization_time_s = cfg.timeout_s;
  finish(r, b, cfg.record_belief);
  return r;
}

TrialResult run_rotate_for_bearing(const TrialConfig& cfg, Rng& rng, TrialResult r, GridBelief b) {
  const auto& m = std::get<BearingModel>(cfg.sensor);
  const auto candidates = waypoint_lattice(cfg.area_side_m);
  UavState x(cfg.area_side_m / 2.0, cfg.area_side_m / 2.0, 0.0);
  double t = 0.0;
  for (;;) {
    const SourcePosition& wp = candidates[rfb_select_waypoint(b, m, candidates).index];
    const double travel = std::hypot(wp.north_m - x.north_m(), wp.east_m - x.east_m()) / cfg.speed_mps;
    t += travel + m.rotation_time_s();
    if (t > cfg.timeout_s) break;
    x.set_position(wp.north_m, wp.east_m);
    const BearingObservation z = sample_bearing_or_uniform(m, x, r.source, rng);
    b = bayes_update(b, m, x, z);
    ++r.steps;
    if (cfg.record_trajectory) r.trajectory.push_back({t, x, z});
    if (max_norm(b) >= cfg.maxnorm_threshold) {
      r.localization_time_s = t;
      finish(r, b, cfg.record_belief);
      return r;
    }
  }
  r.timed_out = true;
  r.localization_time_s = cfg.timeout_s;
  finish(r, b, cfg.record_belief);
  return r;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

}  // namespace

TrialResult run_trial(const TrialConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  GridBelief b = GridBelief::uniform(cfg.area_side_m, cfg.cell_side_m);

  TrialResult r;
  r.seed = cfg.seed;
  r.source = place_source(cfg, b.grid(), rng);
  if (sensor_kind(cfg.sensor) == SensorKind::rfb) {
    return run_rotate_for_bearing(cfg, rng, std::move(r), std::move(b));
  }
  return run_stepped(cfg, rng, std::move(r), std::move(b));
}

BatchSummary summarize(const std::vector<TrialResult>& trials) {
  if (trials.empty()) throw std::invalid_argument("cannot summarize an empty batch");
  BatchSummary s;
  s.n_trials = trials.size();
  std::vector<double> times;
  times.reserve(trials.size());
  for (const auto& t : trials) {
    times.push_back(t.localization_time_s);
    if (t.timed_out) ++s.timeouts;
  }
  const double n = static_cast<double>(times.size());
  double sum = 0.0;
  for (double v : times) sum += v;
  s.mean_s = sum / n;
  double ss = 0.0;
  for (double v : times) ss += (v - s.mean_s) * (v - s.mean_s);
  s.std_s = times.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.std_error_s = s.std_s / std::sqrt(n);
  s.ci95_half_s = 1.96 * s.std_error_s;

  std::sort(times.begin(), times.end());
  const std::size_t mid = times.size() / 2;
  s.median_s = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return s;
}

BatchResult run_batch(const TrialConfig& cfg, std::size_t n_trials, std::size_t jobs) {
  if (n_trials == 0) throw std::invalid_argument("a batch needs at least one trial");
  cfg.validate();
  BatchResult out;
  out.config = cfg;
  out.trials.resize(n_trials);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_trials; i = next++) {
      TrialConfig c = cfg;
      c.seed = cfg.seed + i;
      out.trials[i] = run_trial(c);
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, n_trials);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t j = 0; j < n_threads; ++j) pool.emplace_back(worker);
  }
  out.summary = summarize(out.trials);
  return out;
}

std::vector<SweepRow> sweep_cone_width(const TrialConfig& base, const std::vector<double>& alphas,
                                       const std::vector<double>& mus, std::size_t n_trials,
                                       std::size_t jobs) {
  if (sensor_kind(base.sensor) != SensorKind::fov) {
    throw std::invalid_argument("cone-width sweeps need the FOV sensor");
  }
  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    for (double mu : mus) {
      TrialConfig cfg = base;
      cfg.sensor = FovModel(alpha, mu);
      rows.push_back({alpha, mu, cfg.sample_rate_hz, run_batch(cfg, n_trials, jobs).summary});
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_sample_rate(const TrialConfig& base, const std::vector<double>& rates_hz,
                                        std::size_t n_trials, std::size_t jobs) {
  std::vector<SweepRow> rows;
  for (double rate : rates_hz) {
    TrialConfig cfg = base;
    cfg.sample_rate_hz = rate;
    SweepRow row{0.0, 0.0, rate, run_batch(cfg, n_trials, jobs).summary};
    if (const auto* fov = std::get_if<FovModel>(&cfg.sensor)) {
      row.alpha_deg = fov->cone_width_deg();
      row.mu = fov->mistake_rate();
    }
    rows.push_back(row);
  }
  return rows;
}

void write_trial_csv_header(std::ostream& os) {
  os << "seed,policy,sensor,alpha_deg,mu,sigma_deg,sample_rate_hz,loc_time_s,terminal_maxnorm,"
        "err_m,steps,timed_out\n";
}

void write_trial_csv_row(std::ostream& os, const TrialConfig& cfg, const TrialResult& r) {
  std::string alpha, mu, sigma;
  if (const auto* fov = std::get_if<FovModel>(&cfg.sensor)) {
    alpha = fmt_num(fov->cone_width_deg());
    mu = fmt_num(fov->mistake_rate());
  } else {
    sigma = fmt_num(std::get<BearingModel>(cfg.sensor).sigma_deg());
  }
  os << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.seed, to_string(cfg.policy),
                    to_string(sensor_kind(cfg.sensor)), alpha, mu, sigma, fmt_num(cfg.sample_rate_hz),
                    fmt_num(r.localization_time_s), fmt_num(r.terminal_maxnorm),
                    fmt_num(r.estimate_error_m), r.steps, r.timed_out ? 1 : 0);
}

void write_batch_csv(std::ostream& os, const BatchResult& batch) {
  write_trial_csv_header(os);
  for (const auto& r : batch.trials) write_trial_csv_row(os, batch.config, r);
}

void write_summary_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "alpha_deg,mu,sample_rate_hz,n_trials,mean_s,median_s,std_s,ci95_half_s,timeouts\n";
  for (const auto& row : rows) {
    const auto& s = row.summary;
    os << fmt::format("{},{},{},{},{},{},{},{},{}\n", fmt_num(row.alpha_deg), fmt_num(row.mu),
                      fmt_num(row.sample_rate_hz), s.n_trials, fmt_num(s.mean_s),
                      fmt_num(s.median_s), fmt_num(s.std_s), fmt_num(s.ci95_half_s), s.timeouts);
  }
}

void write_trajectory_csv(std::ostream& os, const TrialConfig& cfg, const TrialResult& r) {
  const bool is_fov = std::holds_alternative<FovModel>(cfg.sensor);
  os << "t_s,uav_north_m,uav_east_m,heading_deg,src_north_m,src_east_m,"
     << (is_fov ? "z" : "bearing_deg") << '\n';
  for (const auto& p : r.trajectory) {
    const std::string obs = std::visit(
        [](const auto& o) {
          if constexpr (std::is_same_v<std::decay_t<decltype(o)>, FovObservation>) {
            return fmt::format("{}", o.z);
          } else {
            return fmt_num(o.bearing_deg);
          }
        },
        p.obs);
    os << fmt::format("{},{},{},{},{},{},{}\n", fmt_num(p.t_s), fmt_num(p.state.north_m()),
                      fmt_num(p.state.east_m()), fmt_num(p.state.heading_deg()),
                      fmt_num(r.source.north_m), fmt_num(r.source.east_m), obs);
  }
}

}  // namespace fovloc
