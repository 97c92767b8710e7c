#include "fovloc/replay.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "fovloc/geometry.hpp"

namespace fovloc {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, const std::string& where, const char* column) {
  field = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw LogParseError(fmt::format("{}: column {}: '{}' is not a number", where, column, field));
  }
  if (!std::isfinite(v)) {
    throw LogParseError(fmt::format("{}: column {}: value must be finite", where, column));
  }
  return v;
}

}  // namespace

std::vector<LogRecord> parse_log(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) {
    throw LogParseError(fmt::format("{}: missing header", source_name));
  }
  const std::string_view header = trim(line);
  bool has_tag = false;
  if (header == kLogHeader) {
    has_tag = false;
  } else if (header == std::string(kLogHeader) + ",tag") {
    has_tag = true;
  } else {
    throw LogParseError(
        fmt::format("{}:1: header must be '{}' (optionally followed by ',tag')", source_name, kLogHeader));
  }
  const std::size_t n_cols = has_tag ? 8 : 7;

  std::vector<LogRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = fmt::format("{}:{}", source_name, line_no);
    const auto fields = split(line);
    if (fields.size() != n_cols) {
      throw LogParseError(fmt::format("{}: expected {} columns, found {}", where, n_cols, fields.size()));
    }
    LogRecord r;
    r.t_s = parse_number(fields[0], where, "t_s");
    r.uav_north_m = parse_number(fields[1], where, "uav_north_m");
    r.uav_east_m = parse_number(fields[2], where, "uav_east_m");
    r.heading_deg = parse_number(fields[3], where, "heading_deg");
    r.src_north_m = parse_number(fields[4], where, "src_north_m");
    r.src_east_m = parse_number(fields[5], where, "src_east_m");
    const double z = parse_number(fields[6], where, "z");
    if (z != 0.0 && z != 1.0) {
      throw LogParseError(fmt::format("{}: column z: must be 0 or 1", where));
    }
    r.z = static_cast<int>(z);
    if (has_tag) r.tag = std::string(trim(fields[7]));
    if (!records.empty() && r.t_s < records.back().t_s) {
      throw LogParseError(fmt::format("{}: timestamps must be non-decreasing", where));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<LogRecord> load_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open log '{}'", path.string()));
  return parse_log(in, path.string());
}

FovRegion classify(const LogRecord& record, double cone_width_deg) {
  if (!(cone_width_deg > 0.0 && cone_width_deg <= 180.0)) {
    throw std::invalid_argument("cone width must lie in (0, 180] degrees");
  }
  const UavState x(record.uav_north_m, record.uav_east_m, record.heading_deg);
  return classify_relative_bearing(relative_bearing_or_zero(x, {record.src_north_m, record.src_east_m}),
                                   cone_width_deg);
}

EmpiricalStats empirical_stats(std::span<const LogRecord> records, double cone_width_deg) {
  if (records.empty()) throw std::invalid_argument("no log records to analyse");
  EmpiricalStats s;
  for (const auto& r : records) {
    switch (classify(r, cone_width_deg)) {
      case FovRegion::front_cone:
        ++s.in_cone_total;
        if (r.z == 1) ++s.in_cone_correct;
        break;
      case FovRegion::rear_cone:
        ++s.in_cone_total;
        if (r.z == 0) ++s.in_cone_correct;
        break;
      case FovRegion::uncertainty:
        ++s.uncertainty_total;
        if (r.z == 1) ++s.uncertainty_z1;
        break;
    }
  }
  if (s.in_cone_total > 0) {
    s.mistake_rate_hat = static_cast<double>(s.in_cone_total - s.in_cone_correct) /
                         static_cast<double>(s.in_cone_total);
  }
  if (s.uncertainty_total > 0) {
    s.uncertainty_z1_frac =
        static_cast<double>(s.uncertainty_z1) / static_cast<double>(s.uncertainty_total);
  }
  return s;
}

std::map<std::string, EmpiricalStats> empirical_stats_by_tag(std::span<const LogRecord> records,
                                                             double cone_width_deg) {
  std::map<std::string, std::vector<LogRecord>> groups;
  for (const auto& r : records) groups[r.tag].push_back(r);
  std::map<std::string, EmpiricalStats> out;
  for (const auto& [tag, group] : groups) out.emplace(tag, empirical_stats(group, cone_width_deg));
  return out;
}

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string(); }

}  // namespace

void write_stats_csv(std::ostream& os, const EmpiricalStats& s) {
  os << "in_cone_total,in_cone_correct,uncertainty_total,uncertainty_z1,mistake_rate_hat,"
        "uncertainty_z1_frac\n";
  os << fmt::format("{},{},{},{},{},{}\n", s.in_cone_total, s.in_cone_correct, s.uncertainty_total,
                    s.uncertainty_z1, opt_num(s.mistake_rate_hat), opt_num(s.uncertainty_z1_frac));
}

void write_stats_report(std::ostream& os, const EmpiricalStats& s, double cone_width_deg) {
  os << fmt::format("cone width:            {} deg\n", cone_width_deg);
  os << fmt::format("in-cone readings:      {} ({} correct)\n", s.in_cone_total, s.in_cone_correct);
  os << "mistake rate:          "
     << (s.mistake_rate_hat ? fmt::format("{:.4f}", *s.mistake_rate_hat) : "undefined") << '\n';
  os << fmt::format("between-cone readings: {} ({} with z=1)\n", s.uncertainty_total, s.uncertainty_z1);
  os << "z=1 fraction between:  "
     << (s.uncertainty_z1_frac ? fmt::format("{:.4f}", *s.uncertainty_z1_frac) : "undefined") << '\n';
}

}  // namespace fovloc
