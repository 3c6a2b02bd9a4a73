#include "rfs/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfs {

double GridDensity::mass() const {
  double m = 0.0;
  for (double v : values) m += v;
  return m * cellVolume;
}

void GridDensity::normalize() {
  const double m = mass();
  if (m <= 0.0) return;
  for (double& v : values) v /= m;
}

GridDensity GridDensity::uniform_1d(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("uniform_1d: count < 1");
  GridDensity g;
  g.cellVolume = (hi - lo) / count;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd p(1);
    p(0) = lo + (i + 0.5) * g.cellVolume;
    g.points.push_back(p);
    g.values.push_back(0.0);
  }
  return g;
}

GridDensity GridDensity::from_mixture(const GaussianMixture& gm, const GridDensity& grid) {
  GridDensity out = grid;
  for (std::size_t i = 0; i < out.points.size(); ++i) out.values[i] = gm.eval(out.points[i]);
  return out;
}

bool GridDensity::same_grid_as(const GridDensity& other) const {
  if (points.size() != other.points.size()) return false;
  if (std::abs(cellVolume - other.cellVolume) > 1e-12) return false;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!points[i].isApprox(other.points[i], 1e-12)) return false;
  return true;
}

double kl_grid(const GridDensity& p, const GridDensity& q) {
  if (!p.same_grid_as(q)) throw std::invalid_argument("kl_grid: grid mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const double pi = p.values[i];
    if (pi <= 0.0) continue;
    const double qi = q.values[i];
    if (qi <= 0.0) return std::numeric_limits<double>::infinity();
    kl += pi * std::log(pi / qi);
  }
  return kl * p.cellVolume;
}

}  // namespace rfs
