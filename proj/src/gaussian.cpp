#include "rfs/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rfs {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
}  // namespace

GaussianComponent::GaussianComponent(double w, Eigen::VectorXd m, Eigen::MatrixXd P)
    : weight(w), mean(std::move(m)), cov(std::move(P)) {
  if (weight < 0.0) throw std::invalid_argument("GaussianComponent: negative weight");
  if (cov.rows() != mean.size() || cov.cols() != mean.size())
    throw std::invalid_argument("GaussianComponent: covariance shape mismatch");
  if (!cov.isApprox(cov.transpose(), 1e-9))
    throw std::invalid_argument("GaussianComponent: covariance not symmetric");
}

double GaussianComponent::eval(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd d = x - mean;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("GaussianComponent: covariance not positive definite");
  const Eigen::VectorXd sol = llt.solve(d);
  const double quad = d.dot(sol);
  double logdet = 0.0;
  for (int i = 0; i < cov.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  const double logn = -0.5 * (quad + logdet + mean.size() * std::log(kTwoPi));
  return std::exp(logn);
}

GaussianMixture::GaussianMixture(int dim, std::vector<GaussianComponent> comps)
    : dim_(dim), components_(std::move(comps)) {
  for (const auto& c : components_)
    if (c.dim() != dim_) throw std::invalid_argument("GaussianMixture: dimension mismatch");
}

void GaussianMixture::add(GaussianComponent c) {
  if (components_.empty() && dim_ == 0) dim_ = c.dim();
  if (c.dim() != dim_) throw std::invalid_argument("GaussianMixture::add: dimension mismatch");
  components_.push_back(std::move(c));
}

void GaussianMixture::add_scaled(const GaussianMixture& other, double scale) {
  for (const auto& c : other.components()) {
    GaussianComponent s = c;
    s.weight *= scale;
    add(std::move(s));
  }
}

double GaussianMixture::mass() const {
  double m = 0.0;
  for (const auto& c : components_) m += c.weight;
  return m;
}

double GaussianMixture::mass_in_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) const {
  if (lo.size() != dim_ || hi.size() != dim_)
    throw std::invalid_argument("mass_in_box: region dimension mismatch");
  double total = 0.0;
  for (const auto& c : components_) {
    double p = c.weight;
    for (int k = 0; k < dim_; ++k) {
      const double sd = std::sqrt(c.cov(k, k));
      p *= normal_cdf((hi(k) - c.mean(k)) / sd) - normal_cdf((lo(k) - c.mean(k)) / sd);
    }
    total += p;
  }
  return total;
}

double GaussianMixture::eval(const Eigen::VectorXd& x) const {
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * c.eval(x);
  return v;
}

Eigen::VectorXd GaussianMixture::weighted_mean_sum() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

void GaussianMixture::rescale_mass(double target) {
  const double m = mass();
  if (m <= 0.0) return;
  const double s = target / m;
  for (auto& c : components_) c.weight *= s;
}

GaussianMixture GaussianMixture::normalized() const {
  GaussianMixture out = *this;
  out.rescale_mass(1.0);
  return out;
}

GaussianMixture gm_reduce(const GaussianMixture& gm, double pruneThreshold,
                          double mergeThreshold, int maxComponents) {
  const double massBefore = gm.mass();

  std::vector<GaussianComponent> pool;
  for (const auto& c : gm.components())
    if (c.weight > pruneThreshold) pool.push_back(c);

  // Merge around the heaviest remaining component, moment matched.
  std::vector<GaussianComponent> merged;
  std::vector<bool> used(pool.size(), false);
  while (true) {
    int best = -1;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (!used[i] && (best < 0 || pool[i].weight > pool[best].weight))
        best = static_cast<int>(i);
    if (best < 0) break;

    const GaussianComponent& seed = pool[best];
    Eigen::LLT<Eigen::MatrixXd> llt(seed.cov);
    std::vector<int> group;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      const Eigen::VectorXd d = pool[i].mean - seed.mean;
      const double maha = d.dot(llt.solve(d));
      if (static_cast<int>(i) == best || maha <= mergeThreshold) group.push_back(static_cast<int>(i));
    }
    double w = 0.0;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(seed.dim());
    for (int i : group) {
      used[i] = true;
      w += pool[i].weight;
      m += pool[i].weight * pool[i].mean;
    }
    m /= w;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(seed.dim(), seed.dim());
    for (int i : group) {
      const Eigen::VectorXd d = pool[i].mean - m;
      P += pool[i].weight * (pool[i].cov + d * d.transpose());
    }
    P /= w;
    P = 0.5 * (P + P.transpose());
    merged.emplace_back(w, std::move(m), std::move(P));
  }

  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.weight > b.weight; });
  if (maxComponents > 0 && static_cast<int>(merged.size()) > maxComponents)
    merged.resize(maxComponents);

  GaussianMixture out(gm.dim(), std::move(merged));
  if (!out.empty() && massBefore > 0.0) out.rescale_mass(massBefore);
  return out;
}

}  // namespace rfs
