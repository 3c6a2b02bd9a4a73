#pragma once

#include "rfs/gaussian.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rfs {

/// Discretized density on a fixed finite set of state points. Each point
/// represents a cell of volume cellVolume; mass() sums value * volume.
struct GridDensity {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> values;
  double cellVolume = 1.0;

  double mass() const;
  void normalize();

  static GridDensity uniform_1d(double lo, double hi, int count);

  /// Evaluates the mixture at every grid point.
  static GridDensity from_mixture(const GaussianMixture& gm, const GridDensity& grid);

  bool same_grid_as(const GridDensity& other) const;
};

/// Kullback-Leibler divergence sum p log(p/q) * cellVolume with the
/// 0 log 0 convention; returns +inf when q vanishes where p does not.
double kl_grid(const GridDensity& p, const GridDensity& q);

}  // namespace rfs
