#include "rfs/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfs {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double gaussian_eval(const Eigen::VectorXd& z, const Eigen::VectorXd& mean,
                     const Eigen::MatrixXd& S) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  const Eigen::VectorXd d = z - mean;
  const double quad = d.dot(llt.solve(d));
  double logdet = 0.0;
  for (int i = 0; i < S.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return std::exp(-0.5 * (quad + logdet + S.rows() * std::log(kTwoPi)));
}

struct KalmanUpdate {
  double likelihood;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

KalmanUpdate kalman_update(const GaussianComponent& c, const Eigen::VectorXd& z,
                           const SensorModel& sensor) {
  const Eigen::VectorXd zPred = sensor.H * c.mean;
  const Eigen::MatrixXd S = sensor.H * c.cov * sensor.H.transpose() + sensor.R;
  const Eigen::MatrixXd K = c.cov * sensor.H.transpose() * S.inverse();
  KalmanUpdate out;
  out.likelihood = gaussian_eval(z, zPred, S);
  out.mean = c.mean + K * (z - zPred);
  Eigen::MatrixXd P = c.cov - K * sensor.H * c.cov;
  out.cov = 0.5 * (P + P.transpose());
  return out;
}

GaussianMixture birth_spd(const BirthModel& birth) {
  GaussianMixture gm;
  for (const auto& b : birth.births) gm.add(b);
  return gm.normalized();
}

}  // namespace

double SensorModel::clutter_region_volume() const {
  double v = 1.0;
  for (int i = 0; i < clutterLo.size(); ++i) v *= clutterHi(i) - clutterLo(i);
  return v;
}

double SensorModel::clutter_density() const {
  if (clutterRate <= 0.0) return 0.0;
  return clutterRate / clutter_region_volume();
}

GaussianMixture phd_predict(const GaussianMixture& prior, const MotionModel& motion,
                            const BirthModel& birth) {
  GaussianMixture out;
  for (const auto& c : prior.components()) {
    Eigen::MatrixXd P = motion.F * c.cov * motion.F.transpose() + motion.Q;
    out.add(GaussianComponent(c.weight * motion.survivalProb, motion.F * c.mean,
                              0.5 * (P + P.transpose())));
  }
  for (const auto& b : birth.births) out.add(b);
  return out;
}

GaussianMixture phd_update(const GaussianMixture& predicted,
                           const std::vector<Eigen::VectorXd>& measurements,
                           const SensorModel& sensor) {
  const double pD = sensor.detectionProb;
  const double kappa = sensor.clutter_density();

  GaussianMixture out;
  for (const auto& c : predicted.components()) {
    GaussianComponent miss = c;
    miss.weight *= 1.0 - pD;
    out.add(std::move(miss));
  }
  if (pD <= 0.0) return out;

  for (const auto& z : measurements) {
    std::vector<KalmanUpdate> ups;
    double denom = kappa;
    for (const auto& c : predicted.components()) {
      KalmanUpdate u = kalman_update(c, z, sensor);
      denom += pD * c.weight * u.likelihood;
      ups.push_back(std::move(u));
    }
    if (denom <= 0.0) continue;
    for (std::size_t j = 0; j < ups.size(); ++j) {
      const double w = pD * predicted[j].weight * ups[j].likelihood / denom;
      if (w > 0.0)
        out.add(GaussianComponent(w, std::move(ups[j].mean), std::move(ups[j].cov)));
    }
  }
  return out;
}

BernoulliComponent bernoulli_predict(const BernoulliComponent& bc, const MotionModel& motion,
                                     double birthProb, const BirthModel& birth) {
  BernoulliComponent out;
  const double survived = motion.survivalProb * bc.existence;
  const double born = birthProb * (1.0 - bc.existence);
  out.existence = survived + born;

  GaussianMixture spd;
  if (survived > 0.0) {
    for (const auto& c : bc.spd.components()) {
      Eigen::MatrixXd P = motion.F * c.cov * motion.F.transpose() + motion.Q;
      spd.add(GaussianComponent(survived * c.weight, motion.F * c.mean,
                                0.5 * (P + P.transpose())));
    }
  }
  if (born > 0.0) spd.add_scaled(birth_spd(birth), born);
  out.spd = spd.normalized();
  return out;
}

BernoulliComponent bernoulli_update(const BernoulliComponent& bc,
                                    const std::vector<Eigen::VectorXd>& measurements,
                                    const SensorModel& sensor) {
  const double pD = sensor.detectionProb;
  const double kappa = sensor.clutter_density();
  const double r = bc.existence;

  // Likelihood-ratio sum over measurements.
  double ratioSum = 0.0;
  GaussianMixture detected;
  for (const auto& z : measurements) {
    for (const auto& c : bc.spd.components()) {
      KalmanUpdate u = kalman_update(c, z, sensor);
      const double lr = kappa > 0.0 ? u.likelihood / kappa : u.likelihood * 1e12;
      ratioSum += c.weight * lr;
      if (c.weight * lr > 0.0)
        detected.add(GaussianComponent(pD * c.weight * lr, std::move(u.mean), std::move(u.cov)));
    }
  }

  const double delta = pD * (1.0 - ratioSum);
  const double denom = 1.0 - r * delta;
  BernoulliComponent out;
  out.existence = denom > 1e-300 ? std::clamp(r * (1.0 - delta) / denom, 0.0, 1.0) : 0.0;

  GaussianMixture spd;
  if (pD < 1.0) spd.add_scaled(bc.spd, 1.0 - pD);
  spd.add_scaled(detected, 1.0);
  out.spd = out.existence > 0.0 ? spd.normalized() : GaussianMixture(bc.spd.dim());
  return out;
}

LmbDensity lmb_predict(const LmbDensity& lmb, const MotionModel& motion, const BirthModel& birth,
                       int currentTime, double birthExistence) {
  LmbDensity out;
  for (const auto& [l, bc] : lmb.tracks) {
    BernoulliComponent pred;
    pred.existence = motion.survivalProb * bc.existence;
    GaussianMixture spd;
    for (const auto& c : bc.spd.components()) {
      Eigen::MatrixXd P = motion.F * c.cov * motion.F.transpose() + motion.Q;
      spd.add(GaussianComponent(c.weight, motion.F * c.mean, 0.5 * (P + P.transpose())));
    }
    pred.spd = spd.normalized();
    out.tracks[l] = std::move(pred);
  }
  for (std::size_t i = 0; i < birth.births.size(); ++i) {
    const Label l{currentTime, static_cast<int>(i)};
    if (out.tracks.contains(l)) throw std::logic_error("lmb_predict: label collision");
    BernoulliComponent born;
    born.existence = birthExistence;
    GaussianMixture spd;
    GaussianComponent c = birth.births[i];
    c.weight = 1.0;
    spd.add(std::move(c));
    born.spd = std::move(spd);
    out.tracks[l] = std::move(born);
  }
  return out;
}

LmbDensity lmb_update(const LmbDensity& lmb, const std::vector<Eigen::VectorXd>& measurements,
                      const SensorModel& sensor) {
  const double pD = sensor.detectionProb;
  const double kappa = std::max(sensor.clutter_density(), 1e-12);

  std::vector<Label> labels;
  for (const auto& [l, bc] : lmb.tracks) labels.push_back(l);
  const std::size_t T = labels.size();
  const std::size_t M = measurements.size();

  // Per-track per-measurement marginal likelihoods and Kalman updates.
  std::vector<std::vector<double>> q(T, std::vector<double>(M, 0.0));
  std::vector<std::vector<GaussianMixture>> upd(T, std::vector<GaussianMixture>(M));
  for (std::size_t t = 0; t < T; ++t) {
    const auto& bc = lmb.tracks.at(labels[t]);
    for (std::size_t m = 0; m < M; ++m) {
      GaussianMixture g;
      for (const auto& c : bc.spd.components()) {
        KalmanUpdate u = kalman_update(c, measurements[m], sensor);
        q[t][m] += c.weight * u.likelihood;
        if (c.weight * u.likelihood > 0.0)
          g.add(GaussianComponent(c.weight * u.likelihood, std::move(u.mean), std::move(u.cov)));
      }
      upd[t][m] = std::move(g);
    }
  }

  // Soft measurement shares, normalized per measurement over tracks.
  std::vector<std::vector<double>> share(T, std::vector<double>(M, 0.0));
  for (std::size_t m = 0; m < M; ++m) {
    double denom = 0.0;
    for (std::size_t t = 0; t < T; ++t)
      denom += lmb.tracks.at(labels[t]).existence * pD * q[t][m];
    if (denom <= 0.0) continue;
    for (std::size_t t = 0; t < T; ++t)
      share[t][m] = lmb.tracks.at(labels[t]).existence * pD * q[t][m] / denom;
  }

  LmbDensity out;
  for (std::size_t t = 0; t < T; ++t) {
    const auto& bc = lmb.tracks.at(labels[t]);
    double ratioSum = 0.0;
    for (std::size_t m = 0; m < M; ++m) ratioSum += share[t][m] * q[t][m] / kappa;
    const double delta = pD * (1.0 - ratioSum);
    const double denom = 1.0 - bc.existence * delta;
    BernoulliComponent nb;
    nb.existence =
        denom > 1e-300 ? std::clamp(bc.existence * (1.0 - delta) / denom, 0.0, 1.0) : 0.0;

    GaussianMixture spd;
    if (pD < 1.0) spd.add_scaled(bc.spd, 1.0 - pD);
    for (std::size_t m = 0; m < M; ++m)
      if (share[t][m] > 0.0) spd.add_scaled(upd[t][m], pD * share[t][m] / kappa);
    nb.spd = nb.existence > 0.0 ? spd.normalized() : GaussianMixture(bc.spd.dim());
    out.tracks[labels[t]] = std::move(nb);
  }
  return out;
}

std::vector<ExtractedState> extract_states(const GaussianMixture& phd) {
  const int n = std::clamp(static_cast<int>(std::lround(phd.mass())), 0,
                           static_cast<int>(phd.size()));
  std::vector<const GaussianComponent*> sorted;
  for (const auto& c : phd.components()) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->weight > b->weight; });
  std::vector<ExtractedState> out;
  for (int i = 0; i < n; ++i) out.push_back({sorted[i]->mean, std::nullopt});
  return out;
}

std::vector<ExtractedState> extract_states(const BernoulliComponent& bc, double threshold) {
  std::vector<ExtractedState> out;
  if (bc.existence > threshold && !bc.spd.empty()) {
    const Eigen::VectorXd mean = bc.spd.normalized().weighted_mean_sum();
    out.push_back({mean, std::nullopt});
  }
  return out;
}

std::vector<ExtractedState> extract_states(const LmbDensity& lmb, double threshold) {
  std::vector<ExtractedState> out;
  for (const auto& [l, bc] : lmb.tracks)
    if (bc.existence > threshold && !bc.spd.empty())
      out.push_back({bc.spd.normalized().weighted_mean_sum(), l});
  return out;
}

GaussianMixture reduce_posterior(const GaussianMixture& gm, const FilterReduction& r) {
  return gm_reduce(gm, r.pruneThreshold, r.mergeThreshold, r.maxComponents);
}

}  // namespace rfs
