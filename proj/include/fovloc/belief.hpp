#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fovloc/geometry.hpp"
#include "fovloc/sensors.hpp"

namespace fovloc {

/// Raised when a Bayes update assigns zero probability to every cell.
class ContradictoryEvidence : public std::runtime_error {
 public:
  explicit ContradictoryEvidence(const std::string& what) : std::runtime_error(what) {}
};

/// Square search area split into square cells. The frame origin is the
/// south-west corner; row indexes north, column indexes east.
class Grid {
 public:
  /// Throws std::invalid_argument unless area_side_m is a positive integer
  /// multiple of cell_side_m.
  Grid(double area_side_m, double cell_side_m);

  double area_side_m() const { return area_side_m_; }
  double cell_side_m() const { return cell_side_m_; }
  std::size_t n_per_side() const { return n_; }
  std::size_t n_cells() const { return n_ * n_; }

  std::size_t index(std::size_t row, std::size_t col) const { return row * n_ + col; }
  const SourcePosition& center(std::size_t idx) const { return centers_[idx]; }
  std::span<const SourcePosition> centers() const { return centers_; }

 private:
  double area_side_m_;
  double cell_side_m_;
  std::size_t n_;
  std::vector<SourcePosition> centers_;
};

/// Normalized histogram over the cells of a Grid. The grid is shared and
/// immutable, so copies are cheap apart from the weight vector.
class GridBelief {
 public:
  static GridBelief uniform(double area_side_m, double cell_side_m);

  /// Normalizes `weights` (row-major) onto the grid. Throws on size mismatch,
  /// negative or non-finite entries, or a zero total.
  static GridBelief from_weights(double area_side_m, double cell_side_m, std::vector<double> weights);

  const Grid& grid() const { return *grid_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t row, std::size_t col) const { return weights_[grid_->index(row, col)]; }
  std::size_t size() const { return weights_.size(); }

  /// Multiplies each weight by `likelihood[i]` and renormalizes. Throws
  /// ContradictoryEvidence if the product vanishes everywhere.
  void update(std::span<const double> likelihood);

 private:
  GridBelief(std::shared_ptr<const Grid> grid, std::vector<double> weights);

  std::shared_ptr<const Grid> grid_;
  std::vector<double> weights_;
};

/// Posterior after an FOV reading taken from `x`, evaluated at cell centers.
GridBelief bayes_update(const GridBelief& b, const FovModel& m, const UavState& x,
                        const FovObservation& obs);

/// Posterior after a bearing reading taken from `x`. A cell whose center
/// coincides with the UAV gets the uninformative density 1/360.
GridBelief bayes_update(const GridBelief& b, const BearingModel& m, const UavState& x,
                        const BearingObservation& obs);

/// Shannon entropy in nats, with 0 ln 0 = 0.
double entropy(std::span<const double> p);
inline double entropy(const GridBelief& b) { return entropy(b.weights()); }

double max_norm(const GridBelief& b);

/// Center of the heaviest cell; ties go to the lowest row-major index.
SourcePosition map_estimate(const GridBelief& b);

/// P(z | x_next) marginalized over the belief.
double predictive_obs_prob(const GridBelief& b, const FovModel& m, const UavState& x_next, int z);

/// Writes "row,col,weight" rows with a header.
void write_belief_csv(std::ostream& os, const GridBelief& b);

}  // namespace fovloc
