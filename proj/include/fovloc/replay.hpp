#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fovloc/sensors.hpp"

namespace fovloc {

/// Malformed log input; the message names the source and line.
class LogParseError : public std::runtime_error {
 public:
  explicit LogParseError(const std::string& what) : std::runtime_error(what) {}
};

/// One timestamped FOV reading with ground truth, in a local planar frame.
struct LogRecord {
  double t_s = 0.0;
  double uav_north_m = 0.0;
  double uav_east_m = 0.0;
  double heading_deg = 0.0;
  double src_north_m = 0.0;
  double src_east_m = 0.0;
  int z = 0;
  std::string tag;  // optional transmitter label; empty when the column is absent
};

/// Required header; an optional trailing ",tag" column is accepted.
inline constexpr const char* kLogHeader = "t_s,uav_north_m,uav_east_m,heading_deg,src_north_m,src_east_m,z";

std::vector<LogRecord> parse_log(std::istream& in, const std::string& source_name = "<stream>");

/// Throws std::runtime_error if the file cannot be opened, LogParseError on
/// bad content (wrong header, missing or non-finite fields, z outside {0,1},
/// decreasing timestamps).
std::vector<LogRecord> load_log(const std::filesystem::path& path);

/// Region of the source as seen from the logged UAV pose, using the same
/// predicate as the FOV likelihood. Throws unless 0 < alpha <= 180.
FovRegion classify(const LogRecord& record, double cone_width_deg);

struct EmpiricalStats {
  std::size_t in_cone_total = 0;
  std::size_t in_cone_correct = 0;
  std::size_t uncertainty_total = 0;
  std::size_t uncertainty_z1 = 0;
  std::optional<double> mistake_rate_hat;     // unset without in-cone records
  std::optional<double> uncertainty_z1_frac;  // unset without uncertainty records
};

/// Counts correct cone identifications (front with z = 1, rear with z = 0)
/// and z = 1 readings between the cones. Throws std::invalid_argument on an
/// empty record set.
EmpiricalStats empirical_stats(std::span<const LogRecord> records, double cone_width_deg);

/// empirical_stats per value of the tag column.
std::map<std::string, EmpiricalStats> empirical_stats_by_tag(std::span<const LogRecord> records,
                                                             double cone_width_deg);

void write_stats_csv(std::ostream& os, const EmpiricalStats& s);
void write_stats_report(std::ostream& os, const EmpiricalStats& s, double cone_width_deg);

}  // namespace fovloc
