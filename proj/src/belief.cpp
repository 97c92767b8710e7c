#include "fovloc/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

namespace fovloc {

Grid::Grid(double area_side_m, double cell_side_m)
    : area_side_m_(area_side_m), cell_side_m_(cell_side_m), n_(0) {
  if (!(area_side_m > 0.0) || !(cell_side_m > 0.0) || !std::isfinite(area_side_m) ||
      !std::isfinite(cell_side_m)) {
    throw std::invalid_argument("grid dimensions must be positive and finite");
  }
  const double ratio = area_side_m / cell_side_m;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw std::invalid_argument(
        fmt::format("area side {} m is not a multiple of cell side {} m", area_side_m, cell_side_m));
  }
  n_ = static_cast<std::size_t>(rounded);
  centers_.reserve(n_ * n_);
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) {
      centers_.push_back({(static_cast<double>(r) + 0.5) * cell_side_m,
                          (static_cast<double>(c) + 0.5) * cell_side_m});
    }
  }
}

GridBelief::GridBelief(std::shared_ptr<const Grid> grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {}

GridBelief GridBelief::uniform(double area_side_m, double cell_side_m) {
  auto grid = std::make_shared<const Grid>(area_side_m, cell_side_m);
  const std::size_t n = grid->n_cells();
  return GridBelief(std::move(grid), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

GridBelief GridBelief::from_weights(double area_side_m, double cell_side_m,
                                    std::vector<double> weights) {
  auto grid = std::make_shared<const Grid>(area_side_m, cell_side_m);
  if (weights.size() != grid->n_cells()) {
    throw std::invalid_argument(
        fmt::format("expected {} weights, got {}", grid->n_cells(), weights.size()));
  }
  GridBelief b(std::move(grid), std::vector<double>(weights.size(), 1.0));
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("belief weights must be finite and non-negative");
    }
  }
  b.update(weights);
  return b;
}

void GridBelief::update(std::span<const double> likelihood) {
  if (likelihood.size() != weights_.size()) {
    throw std::invalid_argument("likelihood size does not match the grid");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    weights_[i] *= likelihood[i];
    total += weights_[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ContradictoryEvidence("observation has zero likelihood under every cell");
  }
  const double inv = 1.0 / total;
  for (double& w : weights_) w *= inv;
}

GridBelief bayes_update(const GridBelief& b, const FovModel& m, const UavState& x,
                        const FovObservation& obs) {
  const auto centers = b.grid().centers();
  std::vector<double> lik(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    lik[i] = fov_likelihood(m, x, centers[i], obs.z);
  }
  GridBelief post = b;
  post.update(lik);
  return post;
}

GridBelief bayes_update(const GridBelief& b, const BearingModel& m, const UavState& x,
                        const BearingObservation& obs) {
  const auto centers = b.grid().centers();
  std::vector<double> lik(centers.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    lik[i] = distance_m(x, centers[i]) < kCoincidentTolM ? 1.0 / 360.0
                                                         : bearing_likelihood(m, obs, x, centers[i]);
  }
  GridBelief post = b;
  post.update(lik);
  return post;
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double w : p) {
    if (w > 0.0) h -= w * std::log(w);
  }
  return h;
}

double max_norm(const GridBelief& b) {
  const auto w = b.weights();
  return *std::max_element(w.begin(), w.end());
}

SourcePosition map_estimate(const GridBelief& b) {
  const auto w = b.weights();
  // max_element returns the first maximum
  const auto it = std::max_element(w.begin(), w.end());
  return b.grid().center(static_cast<std::size_t>(it - w.begin()));
}

double predictive_obs_prob(const GridBelief& b, const FovModel& m, const UavState& x_next, int z) {
  if (z != 0 && z != 1) throw std::invalid_argument("FOV observation must be 0 or 1");
  const auto centers = b.grid().centers();
  const auto w = b.weights();
  double p1 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    p1 += w[i] * fov_likelihood(m, x_next, centers[i], 1);
  }
  // computed from one sum so that P(0) + P(1) == 1 exactly
  return z == 1 ? p1 : 1.0 - p1;
}

void write_belief_csv(std::ostream& os, const GridBelief& b) {
  const std::size_t n = b.grid().n_per_side();
  os << "row,col,weight\n";
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      os << fmt::format("{},{},{}\n", r, c, b.weight(r, c));
    }
  }
}

}  // namespace fovloc
