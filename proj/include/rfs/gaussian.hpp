#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rfs {

/// Single weighted Gaussian component of a mixture intensity.
struct GaussianComponent {
  double weight = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  GaussianComponent() = default;
  GaussianComponent(double w, Eigen::VectorXd m, Eigen::MatrixXd P);

  int dim() const { return static_cast<int>(mean.size()); }

  /// Density value at x.
  double eval(const Eigen::VectorXd& x) const;
};

/// Weighted sum of Gaussian components. Represents either an intensity
/// function (total mass = expected target count) or, when normalized to
/// unit mass, a single-target density.
class GaussianMixture {
public:
  GaussianMixture() = default;
  explicit GaussianMixture(int dim) : dim_(dim) {}
  GaussianMixture(int dim, std::vector<GaussianComponent> comps);

  int dim() const { return dim_; }
  bool empty() const { return components_.empty(); }
  std::size_t size() const { return components_.size(); }

  const std::vector<GaussianComponent>& components() const { return components_; }
  const GaussianComponent& operator[](std::size_t i) const { return components_[i]; }

  void add(GaussianComponent c);
  void add_scaled(const GaussianMixture& other, double scale);

  /// Total mass (sum of weights).
  double mass() const;

  /// Mass inside an axis-aligned box [lo, hi], via per-axis Gaussian CDFs.
  /// Exact only for axis-aligned (diagonal) covariances; used with full
  /// covariances it is the product-of-marginals approximation.
  double mass_in_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) const;

  double eval(const Eigen::VectorXd& x) const;

  /// First moment of the (unnormalized) mixture: sum_j w_j m_j.
  Eigen::VectorXd weighted_mean_sum() const;

  /// Rescale all weights so that mass() == target.
  void rescale_mass(double target);

  /// Returns a copy normalized to unit mass. Empty input stays empty.
  GaussianMixture normalized() const;

private:
  int dim_ = 0;
  std::vector<GaussianComponent> components_;
};

/// Standard mixture reduction: prune components below pruneThreshold,
/// merge components within squared Mahalanobis distance mergeThreshold
/// (moment matched), keep at most maxComponents by weight, then rescale
/// so the total mass matches the pre-reduction mass.
GaussianMixture gm_reduce(const GaussianMixture& gm, double pruneThreshold,
                          double mergeThreshold, int maxComponents);

}  // namespace rfs
