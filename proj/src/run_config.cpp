#include "fovloc/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include <fmt/format.h>

namespace fovloc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, value));
  }
  return out;
}

template <typename T>
T to_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  T out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, value));
  }
  return out;
}

std::string one_of(const std::string& key, const std::string& value,
                   std::initializer_list<const char*> allowed) {
  const std::string v = trim(value);
  for (const char* a : allowed) {
    if (v == a) return v;
  }
  throw ConfigError(fmt::format("{}: '{}' is not one of the allowed values", key, value));
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"seed", [](RunConfig& c, const auto& k, const auto& v) { c.seed = to_unsigned<std::uint64_t>(k, v); }},
      {"area_m", [](RunConfig& c, const auto& k, const auto& v) { c.area_m = to_double(k, v); }},
      {"cell_m", [](RunConfig& c, const auto& k, const auto& v) { c.cell_m = to_double(k, v); }},
      {"sensor", [](RunConfig& c, const auto& k, const auto& v) { c.sensor = one_of(k, v, {"fov", "ib", "rfb"}); }},
      {"policy", [](RunConfig& c, const auto& k, const auto& v) { c.policy = one_of(k, v, {"greedy", "random"}); }},
      {"alpha_deg", [](RunConfig& c, const auto& k, const auto& v) { c.alpha_deg = to_double(k, v); }},
      {"mu", [](RunConfig& c, const auto& k, const auto& v) { c.mu = to_double(k, v); }},
      {"sigma_deg", [](RunConfig& c, const auto& k, const auto& v) { c.sigma_deg = to_double(k, v); }},
      {"rotation_time_s", [](RunConfig& c, const auto& k, const auto& v) { c.rotation_time_s = to_double(k, v); }},
      {"rate_hz", [](RunConfig& c, const auto& k, const auto& v) { c.rate_hz = to_double(k, v); }},
      {"speed_mps", [](RunConfig& c, const auto& k, const auto& v) { c.speed_mps = to_double(k, v); }},
      {"heading_rate_dps", [](RunConfig& c, const auto& k, const auto& v) { c.heading_rate_dps = to_double(k, v); }},
      {"threshold", [](RunConfig& c, const auto& k, const auto& v) { c.threshold = to_double(k, v); }},
      {"timeout_s", [](RunConfig& c, const auto& k, const auto& v) { c.timeout_s = to_double(k, v); }},
      {"placement", [](RunConfig& c, const auto& k, const auto& v) { c.placement = one_of(k, v, {"uniform", "cell"}); }},
      {"source", [](RunConfig& c, const auto&, const auto& v) { c.source = trim(v); }},
      {"trials", [](RunConfig& c, const auto& k, const auto& v) { c.trials = to_unsigned<std::size_t>(k, v); }},
      {"jobs", [](RunConfig& c, const auto& k, const auto& v) { c.jobs = to_unsigned<std::size_t>(k, v); }},
      {"out", [](RunConfig& c, const auto&, const auto& v) { c.out = trim(v); }},
      {"trajectory_dir", [](RunConfig& c, const auto&, const auto& v) { c.trajectory_dir = trim(v); }},
      {"belief_dir", [](RunConfig& c, const auto&, const auto& v) { c.belief_dir = trim(v); }},
      {"alphas", [](RunConfig& c, const auto&, const auto& v) { c.alphas = trim(v); }},
      {"mus", [](RunConfig& c, const auto&, const auto& v) { c.mus = trim(v); }},
      {"rates", [](RunConfig& c, const auto&, const auto& v) { c.rates = trim(v); }},
  };
  return table;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(trim(key));
  if (it == setters().end()) throw ConfigError(fmt::format("unknown setting '{}'", key));
  it->second(cfg, it->first, value);
}

void load_config_file(const std::filesystem::path& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path.string()));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key=value", path.string(), line_no));
    }
    try {
      apply_setting(cfg, t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
}

std::string dump_config(const RunConfig& c) {
  std::string s;
  auto add = [&s](const char* key, const auto& value) { s += fmt::format("{}={}\n", key, value); };
  add("seed", c.seed);
  add("area_m", c.area_m);
  add("cell_m", c.cell_m);
  add("sensor", c.sensor);
  add("policy", c.policy);
  add("alpha_deg", c.alpha_deg);
  add("mu", c.mu);
  add("sigma_deg", c.sigma_deg);
  add("rotation_time_s", c.rotation_time_s);
  add("rate_hz", c.rate_hz);
  add("speed_mps", c.speed_mps);
  add("heading_rate_dps", c.heading_rate_dps);
  add("threshold", c.threshold);
  add("timeout_s", c.timeout_s);
  add("placement", c.placement);
  add("source", c.source);
  add("trials", c.trials);
  add("jobs", c.jobs);
  add("out", c.out);
  add("trajectory_dir", c.trajectory_dir);
  add("belief_dir", c.belief_dir);
  add("alphas", c.alphas);
  add("mus", c.mus);
  add("rates", c.rates);
  return s;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    out.push_back(to_double("list", text.substr(start, comma == std::string::npos ? comma : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

TrialConfig to_trial_config(const RunConfig& c) {
  TrialConfig t;
  t.seed = c.seed;
  t.area_side_m = c.area_m;
  t.cell_side_m = c.cell_m;
  t.sample_rate_hz = c.rate_hz;
  t.speed_mps = c.speed_mps;
  t.heading_rate_dps = c.heading_rate_dps;
  t.maxnorm_threshold = c.threshold;
  t.timeout_s = c.timeout_s;
  try {
    if (c.sensor == "fov") {
      t.sensor = FovModel(c.alpha_deg, c.mu);
    } else if (c.sensor == "ib") {
      t.sensor = BearingModel(c.sigma_deg, 0.0);
    } else if (c.sensor == "rfb") {
      if (!(c.rotation_time_s > 0.0)) throw ConfigError("rfb needs a positive rotation_time_s");
      t.sensor = BearingModel(c.sigma_deg, c.rotation_time_s);
    } else {
      throw ConfigError(fmt::format("unknown sensor '{}'", c.sensor));
    }
    if (c.policy == "greedy") {
      t.policy = Policy::greedy;
    } else if (c.policy == "random") {
      t.policy = Policy::random;
    } else {
      throw ConfigError(fmt::format("unknown policy '{}'", c.policy));
    }
    if (c.placement == "uniform") {
      t.placement = SourcePlacement::uniform;
    } else if (c.placement == "cell") {
      t.placement = SourcePlacement::cell_center;
    } else {
      throw ConfigError(fmt::format("unknown placement '{}'", c.placement));
    }
    if (!c.source.empty()) {
      const auto xy = parse_number_list(c.source);
      if (xy.size() != 2) throw ConfigError("source must be 'north,east'");
      t.source = SourcePosition{xy[0], xy[1]};
    }
    t.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return t;
}

}  // namespace fovloc
