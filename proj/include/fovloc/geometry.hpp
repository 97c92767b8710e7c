#pragma once

#include <stdexcept>
#include <string>

namespace fovloc {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Distances below this are treated as coincident positions.
inline constexpr double kCoincidentTolM = 1e-6;

/// Raised when a bearing is requested between coincident points.
class DegenerateGeometry : public std::domain_error {
 public:
  explicit DegenerateGeometry(const std::string& what) : std::domain_error(what) {}
};

/// Wraps an angle in degrees to (-180, 180].
double wrap_angle(double deg);

/// Wraps an angle in degrees to [0, 360).
double wrap_360(double deg);

struct SourcePosition {
  double north_m = 0.0;
  double east_m = 0.0;
};

/// Planar UAV pose. The heading is measured east of north and always kept in
/// [0, 360) by the constructor and set_heading().
class UavState {
 public:
  UavState() = default;
  UavState(double north_m, double east_m, double heading_deg);

  double north_m() const { return north_m_; }
  double east_m() const { return east_m_; }
  double heading_deg() const { return heading_deg_; }

  void set_position(double north_m, double east_m);
  void set_heading(double heading_deg);

  friend bool operator==(const UavState&, const UavState&) = default;

 private:
  double north_m_ = 0.0;
  double east_m_ = 0.0;
  double heading_deg_ = 0.0;
};

double distance_m(const UavState& x, const SourcePosition& s);

/// Four-quadrant bearing from the UAV to the source in [0, 360), east of north.
/// Throws DegenerateGeometry when the points coincide.
double bearing(const UavState& x, const SourcePosition& s);

/// bearing() minus heading, wrapped to (-180, 180]. Throws on coincidence.
double relative_bearing(const UavState& x, const SourcePosition& s);

/// Variant used inside filter and planner loops: the relative bearing of a
/// coincident source is defined as 0 instead of throwing.
double relative_bearing_or_zero(const UavState& x, const SourcePosition& s);

/// Bearing in [0, 360) from (north, east) offsets; 0 when both are ~0.
double bearing_from_offset(double d_north, double d_east);

/// Relative bearing of a precomputed absolute bearing seen from `heading_deg`.
inline double relative_from_bearing(double bearing_deg, double heading_deg) {
  return wrap_angle(bearing_deg - heading_deg);
}

}  // namespace fovloc
