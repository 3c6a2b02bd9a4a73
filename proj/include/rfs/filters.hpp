#pragma once

#include "rfs/densities.hpp"
#include "rfs/gaussian.hpp"
#include "rfs/labeled.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace rfs {

/// Linear-Gaussian motion model with survival probability.
struct MotionModel {
  Eigen::MatrixXd F;
  Eigen::MatrixXd Q;
  double survivalProb = 1.0;
};

/// Linear-Gaussian sensor with detection profile and uniform clutter
/// over an axis-aligned region in measurement space.
struct SensorModel {
  Eigen::MatrixXd H;
  Eigen::MatrixXd R;
  double detectionProb = 1.0;
  double clutterRate = 0.0;
  Eigen::VectorXd clutterLo;
  Eigen::VectorXd clutterHi;

  double clutter_region_volume() const;
  double clutter_density() const;  // clutterRate / region volume
};

/// Birth intensity; for labeled filters each entry becomes a fresh
/// label (current time; index).
struct BirthModel {
  std::vector<GaussianComponent> births;  // weight field = birth weight / existence
};

// ---- GM-PHD recursion ----

GaussianMixture phd_predict(const GaussianMixture& prior, const MotionModel& motion,
                            const BirthModel& birth);
GaussianMixture phd_update(const GaussianMixture& predicted,
                           const std::vector<Eigen::VectorXd>& measurements,
                           const SensorModel& sensor);

// ---- Bernoulli recursion ----

BernoulliComponent bernoulli_predict(const BernoulliComponent& bc, const MotionModel& motion,
                                     double birthProb, const BirthModel& birth);
BernoulliComponent bernoulli_update(const BernoulliComponent& bc,
                                    const std::vector<Eigen::VectorXd>& measurements,
                                    const SensorModel& sensor);

// ---- LMB recursion (per-label Bernoulli tracks with a shared soft
// measurement assignment across tracks) ----

LmbDensity lmb_predict(const LmbDensity& lmb, const MotionModel& motion, const BirthModel& birth,
                       int currentTime, double birthExistence);
LmbDensity lmb_update(const LmbDensity& lmb, const std::vector<Eigen::VectorXd>& measurements,
                      const SensorModel& sensor);

// ---- State extraction ----

struct ExtractedState {
  Eigen::VectorXd state;
  std::optional<Label> label;
};

/// PHD: means of the round(mass) heaviest components. Bernoulli/LMB:
/// means of tracks with existence above the threshold.
std::vector<ExtractedState> extract_states(const GaussianMixture& phd);
std::vector<ExtractedState> extract_states(const BernoulliComponent& bc, double threshold);
std::vector<ExtractedState> extract_states(const LmbDensity& lmb, double threshold);

/// Reduction applied after every filter update.
struct FilterReduction {
  double pruneThreshold = 1e-5;
  double mergeThreshold = 4.0;
  int maxComponents = 100;
};

GaussianMixture reduce_posterior(const GaussianMixture& gm, const FilterReduction& r);

}  // namespace rfs
