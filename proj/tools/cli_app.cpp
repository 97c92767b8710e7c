#include "cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fovloc/replay.hpp"
#include "fovloc/run_config.hpp"
#include "fovloc/simulator.hpp"

namespace fovloc::cli {

namespace {

namespace fs = std::filesystem;

// Runtime failures (I/O) as opposed to usage errors.
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const CLI::Validator kConeWidth(
    [](std::string& v) -> std::string {
      double a = 0.0;
      try {
        a = std::stod(v);
      } catch (const std::exception&) {
        return "cone width must be a number";
      }
      return (a > 0.0 && a <= 180.0) ? std::string() : "cone width must lie in (0, 180]";
    },
    "(0,180]");

void add_config_flag(CLI::App* app) {
  app->add_option("--config", "key=value settings file; flags override its values");
}

void add_trial_options(CLI::App* app, RunConfig& c) {
  add_config_flag(app);
  app->add_option("--seed", c.seed, "Batch seed; trial i uses seed + i");
  app->add_option("--area", c.area_m, "Search-area side (m)");
  app->add_option("--cell", c.cell_m, "Grid cell side (m)");
  app->add_option("--sensor", c.sensor, "fov | ib | rfb")->check(CLI::IsMember({"fov", "ib", "rfb"}));
  app->add_option("--policy", c.policy, "greedy | random")->check(CLI::IsMember({"greedy", "random"}));
  app->add_option("--alpha", c.alpha_deg, "FOV cone width (deg)")->check(kConeWidth);
  app->add_option("--mu", c.mu, "FOV mistake rate");
  app->add_option("--sigma", c.sigma_deg, "Bearing noise std (deg)");
  app->add_option("--rotation-time", c.rotation_time_s, "RFB rotation time (s)");
  app->add_option("--rate", c.rate_hz, "Sample rate (Hz)");
  app->add_option("--speed", c.speed_mps, "Planar speed (m/s)");
  app->add_option("--heading-rate", c.heading_rate_dps, "Heading rate magnitude (deg/s)");
  app->add_option("--threshold", c.threshold, "Max-norm that counts as localized");
  app->add_option("--timeout", c.timeout_s, "Trial timeout (s)");
  app->add_option("--placement", c.placement, "uniform | cell")->check(CLI::IsMember({"uniform", "cell"}));
  app->add_option("--source", c.source, "Fixed source 'north,east' (m)");
  app->add_option("--trials", c.trials, "Trials per configuration")->check(CLI::PositiveNumber);
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output CSV path");
}

// The config file must be applied before flags are bound, so it is located
// ahead of the real parse.
std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::ofstream open_output(const std::string& path) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw RuntimeFailure(fmt::format("cannot write '{}'", path));
  return os;
}

void print_summary(std::ostream& out, const std::string& label, const BatchSummary& s) {
  out << fmt::format("{}: trials={} mean_s={:.3f} median_s={:.3f} std_s={:.3f} ci95_half_s={:.3f} timeouts={}\n",
                     label, s.n_trials, s.mean_s, s.median_s, s.std_s, s.ci95_half_s, s.timeouts);
}

int cmd_simulate(const RunConfig& rc, std::ostream& out) {
  TrialConfig cfg = to_trial_config(rc);
  cfg.record_trajectory = !rc.trajectory_dir.empty();
  cfg.record_belief = !rc.belief_dir.empty();
  const BatchResult batch = run_batch(cfg, rc.trials, rc.jobs);

  auto os = open_output(rc.out);
  write_batch_csv(os, batch);
  if (cfg.record_trajectory) {
    fs::create_directories(rc.trajectory_dir);
    for (const auto& r : batch.trials) {
      auto ts = open_output((fs::path(rc.trajectory_dir) / fmt::format("trial_{}.csv", r.seed)).string());
      write_trajectory_csv(ts, cfg, r);
    }
  }
  if (cfg.record_belief) {
    fs::create_directories(rc.belief_dir);
    for (const auto& r : batch.trials) {
      auto bs = open_output((fs::path(rc.belief_dir) / fmt::format("belief_{}.csv", r.seed)).string());
      write_belief_csv(bs, *r.final_belief);
    }
  }
  print_summary(out, fmt::format("{}-{}", to_string(sensor_kind(cfg.sensor)), to_string(cfg.policy)),
                batch.summary);
  return kExitOk;
}

int cmd_sweep(const RunConfig& rc, bool cone, std::ostream& out) {
  const TrialConfig base = to_trial_config(rc);
  std::vector<SweepRow> rows;
  if (cone) {
    if (sensor_kind(base.sensor) != SensorKind::fov) throw ConfigError("cone sweeps need --sensor fov");
    const auto alphas = parse_number_list(rc.alphas);
    const auto mus = parse_number_list(rc.mus);
    for (double a : alphas) {
      if (!(a > 0.0 && a <= 180.0)) throw ConfigError(fmt::format("alpha {} outside (0, 180]", a));
    }
    for (double m : mus) FovModel(120.0, m);  // validates the mistake rate
    rows = sweep_cone_width(base, alphas, mus, rc.trials, rc.jobs);
  } else {
    const auto rates = parse_number_list(rc.rates);
    for (double r : rates) {
      if (!(r > 0.0)) throw ConfigError(fmt::format("rate {} must be positive", r));
    }
    rows = sweep_sample_rate(base, rates, rc.trials, rc.jobs);
  }
  auto os = open_output(rc.out);
  write_summary_csv(os, rows);
  for (const auto& row : rows) {
    print_summary(out, fmt::format("alpha={} mu={} rate={}", row.alpha_deg, row.mu, row.sample_rate_hz),
                  row.summary);
  }
  return kExitOk;
}

int cmd_replay(const std::string& log, double alpha, const std::string& csv_out, bool by_tag,
               std::ostream& out) {
  std::vector<LogRecord> records;
  try {
    records = load_log(log);
  } catch (const std::exception& e) {
    throw RuntimeFailure(e.what());
  }
  if (records.empty()) throw RuntimeFailure(fmt::format("log '{}' has no records", log));
  const EmpiricalStats stats = empirical_stats(records, alpha);
  write_stats_report(out, stats, alpha);
  if (by_tag) {
    for (const auto& [tag, s] : empirical_stats_by_tag(records, alpha)) {
      out << fmt::format("\n[tag {}]\n", tag.empty() ? "<none>" : tag);
      write_stats_report(out, s, alpha);
    }
  }
  if (!csv_out.empty()) {
    auto os = open_output(csv_out);
    write_stats_csv(os, stats);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  if (const auto path = find_config_path(args)) {
    try {
      load_config_file(*path, rc);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitRuntime;
    }
  }

  CLI::App app{"Field-of-view RF source localization: simulation and log replay", "fovloc"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo batch and write per-trial CSV");
  add_trial_options(simulate, rc);
  simulate->add_option("--trajectory-dir", rc.trajectory_dir, "Write one trajectory CSV per trial");
  simulate->add_option("--belief-dir", rc.belief_dir, "Write each trial's final belief as CSV");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps (cone | rate)");
  sweep->require_subcommand(1);
  auto* cone = sweep->add_subcommand("cone", "Cone width x mistake rate sweep");
  add_trial_options(cone, rc);
  cone->add_option("--alphas", rc.alphas, "Comma-separated cone widths (deg)");
  cone->add_option("--mus", rc.mus, "Comma-separated mistake rates");
  auto* rate = sweep->add_subcommand("rate", "Sample-rate sweep");
  add_trial_options(rate, rc);
  rate->add_option("--rates", rc.rates, "Comma-separated sample rates (Hz)");

  std::string log_path;
  std::string replay_out;
  double replay_alpha = rc.alpha_deg;
  bool by_tag = false;
  auto* replay = app.add_subcommand("replay", "Empirical FOV sensor statistics from a log");
  replay->add_option("--log", log_path, "Log CSV")->required();
  replay->add_option("--alpha", replay_alpha, "Cone width (deg)")->check(kConeWidth);
  replay->add_option("--out", replay_out, "Optional single-row CSV output");
  replay->add_flag("--by-tag", by_tag, "Also report per tag column value");

  auto* dump = app.add_subcommand("dump-config", "Print the effective settings as key=value");
  add_trial_options(dump, rc);
  dump->add_option("--trajectory-dir", rc.trajectory_dir);
  dump->add_option("--belief-dir", rc.belief_dir);
  dump->add_option("--alphas", rc.alphas);
  dump->add_option("--mus", rc.mus);
  dump->add_option("--rates", rc.rates);

  // CLI11 expects the argument list reversed, program name excluded
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (rc.trials == 0) throw ConfigError("trials must be at least 1");
    if (rc.jobs == 0) throw ConfigError("jobs must be at least 1");
    if (*simulate) return cmd_simulate(rc, out);
    if (*cone) return cmd_sweep(rc, true, out);
    if (*rate) return cmd_sweep(rc, false, out);
    if (*replay) return cmd_replay(log_path, replay_alpha, replay_out, by_tag, out);
    if (*dump) {
      to_trial_config(rc);  // reject invalid combinations here too
      out << dump_config(rc);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace fovloc::cli
