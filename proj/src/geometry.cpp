#include "fovloc/geometry.hpp"

#include <cmath>

namespace fovloc {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

double wrap_angle(double deg) {
  require_finite(deg, "angle");
  // only wrap if really necessary; keeps exact values in range untouched
  if (deg > -180.0 && deg <= 180.0) return deg;
  // single shifts are exact in this range and agree with fmod
  if (deg > 180.0 && deg <= 540.0) return deg - 360.0;
  if (deg <= -180.0 && deg > -540.0) return deg + 360.0;
  double r = std::fmod(deg, 360.0);  // (-360, 360), sign of deg
  if (r > 180.0) r -= 360.0;
  if (r <= -180.0) r += 360.0;
  return r;
}

double wrap_360(double deg) {
  require_finite(deg, "angle");
  if (deg >= 0.0 && deg < 360.0) return deg;
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value can round up to exactly 360
  if (r >= 360.0) r = 0.0;
  return r;
}

UavState::UavState(double north_m, double east_m, double heading_deg) {
  set_position(north_m, east_m);
  set_heading(heading_deg);
}

void UavState::set_position(double north_m, double east_m) {
  require_finite(north_m, "north_m");
  require_finite(east_m, "east_m");
  north_m_ = north_m;
  east_m_ = east_m;
}

void UavState::set_heading(double heading_deg) { heading_deg_ = wrap_360(heading_deg); }

double distance_m(const UavState& x, const SourcePosition& s) {
  return std::hypot(s.north_m - x.north_m(), s.east_m - x.east_m());
}

double bearing_from_offset(double d_north, double d_east) {
  if (std::hypot(d_north, d_east) < kCoincidentTolM) return 0.0;
  return wrap_360(std::atan2(d_east, d_north) * kRadToDeg);
}

double bearing(const UavState& x, const SourcePosition& s) {
  if (distance_m(x, s) < kCoincidentTolM) {
    throw DegenerateGeometry("bearing undefined: UAV and source coincide");
  }
  return bearing_from_offset(s.north_m - x.north_m(), s.east_m - x.east_m());
}

double relative_bearing(const UavState& x, const SourcePosition& s) {
  return relative_from_bearing(bearing(x, s), x.heading_deg());
}

double relative_bearing_or_zero(const UavState& x, const SourcePosition& s) {
  if (distance_m(x, s) < kCoincidentTolM) return 0.0;
  return relative_from_bearing(bearing_from_offset(s.north_m - x.north_m(), s.east_m - x.east_m()),
                               x.heading_deg());
}

}  // namespace fovloc
