#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <variant>

#include "fovloc/geometry.hpp"

namespace fovloc {

/// Caller-owned generator used for every stochastic draw in the library.
using Rng = std::mt19937_64;

/// Lower bound applied to bearing densities before they enter a Bayes update.
inline constexpr double kDensityFloor = 1e-300;

/// Number of bearing bins used when planning over continuous bearing readings.
inline constexpr int kBearingBins = 36;
inline constexpr double kBearingBinWidthDeg = 360.0 / kBearingBins;

/// Two-antenna pseudo-bearing sensor. The front and rear cones each span
/// `cone_width_deg`; inside a cone the reading is wrong with probability
/// `mistake_rate`, between the cones both readings are equally likely.
class FovModel {
 public:
  /// Throws std::invalid_argument unless 0 < cone_width_deg <= 180 and
  /// 0 <= mistake_rate < 0.5.
  FovModel(double cone_width_deg, double mistake_rate);

  double cone_width_deg() const { return cone_width_deg_; }
  double mistake_rate() const { return mistake_rate_; }

 private:
  double cone_width_deg_;
  double mistake_rate_;
};

/// Noisy bearing sensor. A zero rotation time models an instantaneous bearing
/// (beam-steering style) sensor; a positive one models rotate-for-bearing.
class BearingModel {
 public:
  BearingModel(double sigma_deg, double rotation_time_s);

  double sigma_deg() const { return sigma_deg_; }
  double rotation_time_s() const { return rotation_time_s_; }
  bool rotates() const { return rotation_time_s_ > 0.0; }

 private:
  double sigma_deg_;
  double rotation_time_s_;
};

using SensorModel = std::variant<FovModel, BearingModel>;

struct FovObservation {
  int z = 0;  // 1: front antenna reads stronger
};

struct BearingObservation {
  double bearing_deg = 0.0;  // [0, 360)
};

enum class FovRegion { front_cone, rear_cone, uncertainty };

/// Region of a relative bearing (degrees, any range). Cone edges are inside.
FovRegion classify_relative_bearing(double relative_deg, double cone_width_deg);

/// P(z = 1) for a source at the given relative bearing.
double fov_prob_z1(const FovModel& m, double relative_deg);

/// P(z | x, s). Throws std::invalid_argument for z outside {0, 1}. A source
/// coincident with the UAV is treated as dead ahead.
double fov_likelihood(const FovModel& m, const UavState& x, const SourcePosition& s, int z);

FovObservation fov_sample(const FovModel& m, const UavState& x, const SourcePosition& s, Rng& rng);

/// True bearing plus zero-mean Gaussian noise, wrapped to [0, 360).
/// Throws DegenerateGeometry for coincident positions.
BearingObservation bearing_sample(const BearingModel& m, const UavState& x, const SourcePosition& s,
                                  Rng& rng);

/// Gaussian density (per degree) of the wrapped angular error, floored at
/// kDensityFloor. Throws DegenerateGeometry for coincident positions.
double bearing_likelihood(const BearingModel& m, const BearingObservation& obs, const UavState& x,
                          const SourcePosition& s);

/// Density of a wrapped bearing error for the given model, floored.
double bearing_error_density(const BearingModel& m, double error_deg);

/// Probability that a reading falls in each 10 degree bin [10k, 10k + 10),
/// given the true bearing. Sums to 1.
std::array<double, kBearingBins> bearing_bin_probs(const BearingModel& m, double true_bearing_deg);

/// Same distribution restricted to the contiguous run of bins that carry
/// non-negligible mass: probs[j] belongs to bin (first_bin + j) mod 36.
struct BearingBinWindow {
  int first_bin = 0;
  int count = 0;
  std::array<double, kBearingBins> probs{};
};

BearingBinWindow bearing_bin_window(const BearingModel& m, double true_bearing_deg);

}  // namespace fovloc
