#include "fovloc/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fovloc {

FovModel::FovModel(double cone_width_deg, double mistake_rate)
    : cone_width_deg_(cone_width_deg), mistake_rate_(mistake_rate) {
  if (!(cone_width_deg > 0.0 && cone_width_deg <= 180.0)) {
    throw std::invalid_argument("cone width must lie in (0, 180] degrees");
  }
  if (!(mistake_rate >= 0.0 && mistake_rate < 0.5)) {
    throw std::invalid_argument("mistake rate must lie in [0, 0.5)");
  }
}

BearingModel::BearingModel(double sigma_deg, double rotation_time_s)
    : sigma_deg_(sigma_deg), rotation_time_s_(rotation_time_s) {
  if (!(sigma_deg > 0.0) || !std::isfinite(sigma_deg)) {
    throw std::invalid_argument("bearing sigma must be positive");
  }
  if (!(rotation_time_s >= 0.0) || !std::isfinite(rotation_time_s)) {
    throw std::invalid_argument("rotation time must be non-negative");
  }
}

FovRegion classify_relative_bearing(double relative_deg, double cone_width_deg) {
  const double half = 0.5 * cone_width_deg;
  const double rel = wrap_angle(relative_deg);
  if (std::abs(rel) <= half) return FovRegion::front_cone;
  if (std::abs(wrap_angle(rel - 180.0)) <= half) return FovRegion::rear_cone;
  return FovRegion::uncertainty;
}

double fov_prob_z1(const FovModel& m, double relative_deg) {
  switch (classify_relative_bearing(relative_deg, m.cone_width_deg())) {
    case FovRegion::front_cone:
      return 1.0 - m.mistake_rate();
    case FovRegion::rear_cone:
      return m.mistake_rate();
    case FovRegion::uncertainty:
      break;
  }
  return 0.5;
}

double fov_likelihood(const FovModel& m, const UavState& x, const SourcePosition& s, int z) {
  if (z != 0 && z != 1) throw std::invalid_argument("FOV observation must be 0 or 1");
  const double p1 = fov_prob_z1(m, relative_bearing_or_zero(x, s));
  return z == 1 ? p1 : 1.0 - p1;
}

FovObservation fov_sample(const FovModel& m, const UavState& x, const SourcePosition& s, Rng& rng) {
  std::bernoulli_distribution draw(fov_likelihood(m, x, s, 1));
  return {draw(rng) ? 1 : 0};
}

BearingObservation bearing_sample(const BearingModel& m, const UavState& x, const SourcePosition& s,
                                  Rng& rng) {
  const double truth = bearing(x, s);
  std::normal_distribution<double> noise(0.0, m.sigma_deg());
  return {wrap_360(truth + noise(rng))};
}

double bearing_error_density(const BearingModel& m, double error_deg) {
  const double e = wrap_angle(error_deg) / m.sigma_deg();
  const double density = std::exp(-0.5 * e * e) / (m.sigma_deg() * std::sqrt(2.0 * kPi));
  return std::max(density, kDensityFloor);
}

double bearing_likelihood(const BearingModel& m, const BearingObservation& obs, const UavState& x,
                          const SourcePosition& s) {
  return bearing_error_density(m, obs.bearing_deg - bearing(x, s));
}

namespace {

// Beyond this many sigmas the CDF is snapped to 0 or 1; the neglected mass
// (about 1e-19) is far below double-precision resolution of the bin masses.
constexpr double kTailSigmas = 9.0;

double tail_cdf(double z) {
  if (z < -kTailSigmas) return 0.0;
  if (z > kTailSigmas) return 1.0;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// General route: every edge, including the bin that straddles the antipode.
std::array<double, kBearingBins> bin_probs_full(double sigma, double true_bearing_deg) {
  const double cdf_lo = tail_cdf(-180.0 / sigma);
  const double cdf_hi = tail_cdf(180.0 / sigma);

  std::array<double, kBearingBins + 1> edge_cdf{};
  std::array<double, kBearingBins + 1> edge_err{};
  for (int k = 0; k <= kBearingBins; ++k) {
    edge_err[k] = wrap_angle(k * kBearingBinWidthDeg - true_bearing_deg);
    edge_cdf[k] = tail_cdf(edge_err[k] / sigma);
  }

  std::array<double, kBearingBins> probs{};
  double total = 0.0;
  for (int k = 0; k < kBearingBins; ++k) {
    double mass;
    if (edge_err[k + 1] >= edge_err[k]) {
      mass = edge_cdf[k + 1] - edge_cdf[k];
    } else {
      // bin straddles the antipode of the true bearing
      mass = (cdf_hi - edge_cdf[k]) + (edge_cdf[k + 1] - cdf_lo);
    }
    probs[k] = std::max(mass, 0.0);
    total += probs[k];
  }
  for (double& p : probs) p /= total;
  return probs;
}

}  // namespace

BearingBinWindow bearing_bin_window(const BearingModel& m, double true_bearing_deg) {
  const double sigma = m.sigma_deg();
  const double reach = kTailSigmas * sigma;
  BearingBinWindow w;
  if (reach + kBearingBinWidthDeg >= 180.0) {
    // wide noise: use every bin
    const auto full = bin_probs_full(sigma, true_bearing_deg);
    w.first_bin = 0;
    w.count = kBearingBins;
    std::copy(full.begin(), full.end(), w.probs.begin());
    return w;
  }
  const double b = wrap_360(true_bearing_deg);
  // bins whose span intersects [b - reach, b + reach]; offsets stay unwrapped
  const int lo = static_cast<int>(std::floor((b - reach) / kBearingBinWidthDeg));
  const int hi = static_cast<int>(std::floor((b + reach) / kBearingBinWidthDeg));
  w.first_bin = ((lo % kBearingBins) + kBearingBins) % kBearingBins;
  w.count = hi - lo + 1;
  double total = 0.0;
  double cdf_prev = tail_cdf((lo * kBearingBinWidthDeg - b) / sigma);
  for (int j = 0; j < w.count; ++j) {
    const double cdf_next = tail_cdf(((lo + j + 1) * kBearingBinWidthDeg - b) / sigma);
    w.probs[j] = std::max(cdf_next - cdf_prev, 0.0);
    total += w.probs[j];
    cdf_prev = cdf_next;
  }
  for (int j = 0; j < w.count; ++j) w.probs[j] /= total;
  return w;
}

std::array<double, kBearingBins> bearing_bin_probs(const BearingModel& m, double true_bearing_deg) {
  const BearingBinWindow w = bearing_bin_window(m, true_bearing_deg);
  std::array<double, kBearingBins> probs{};
  for (int j = 0; j < w.count; ++j) probs[(w.first_bin + j) % kBearingBins] = w.probs[j];
  return probs;
}

}  // namespace fovloc
