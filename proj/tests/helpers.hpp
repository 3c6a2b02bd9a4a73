#pragma once

// Shared random-instance generators for the test suite. All generators
// are 1-D so gridded cross-checks stay cheap.

#include "rfs/densities.hpp"
#include "rfs/gaussian.hpp"
#include "rfs/grid.hpp"
#include "rfs/labeled.hpp"

#include <random>
#include <vector>

namespace testutil {

inline rfs::GaussianComponent comp1(double w, double mean, double var) {
  Eigen::VectorXd m(1);
  m << mean;
  Eigen::MatrixXd P(1, 1);
  P << var;
  return rfs::GaussianComponent(w, m, P);
}

inline Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

/// Normalized 1-D mixture with means inside [lo, hi].
inline rfs::GaussianMixture random_spd(std::mt19937_64& rng, int comps = 2, double lo = 2.0,
                                       double hi = 10.0) {
  std::uniform_real_distribution<double> mean(lo, hi);
  std::uniform_real_distribution<double> var(0.5, 2.0);
  std::uniform_real_distribution<double> wgt(0.2, 1.0);
  rfs::GaussianMixture gm(1);
  for (int i = 0; i < comps; ++i) gm.add(comp1(wgt(rng), mean(rng), var(rng)));
  return gm.normalized();
}

inline rfs::BernoulliComponent random_bernoulli(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.05, 0.95);
  return {r(rng), random_spd(rng)};
}

inline rfs::MultiBernoulli random_mb(std::mt19937_64& rng, int comps = 3) {
  rfs::MultiBernoulli mb;
  for (int i = 0; i < comps; ++i) mb.components.push_back(random_bernoulli(rng));
  return mb;
}

inline rfs::MbMixture random_mbm(std::mt19937_64& rng, int hyps = 2, int comps = 2) {
  std::uniform_real_distribution<double> wgt(0.2, 1.0);
  rfs::MbMixture mbm;
  for (int j = 0; j < hyps; ++j) mbm.hypotheses.push_back({wgt(rng), random_mb(rng, comps)});
  mbm.normalize_weights();
  return mbm;
}

inline rfs::LmbDensity random_lmb(std::mt19937_64& rng, const std::vector<rfs::Label>& labels) {
  rfs::LmbDensity lmb;
  for (const auto& l : labels) lmb.tracks[l] = random_bernoulli(rng);
  return lmb;
}

/// delta-GLMB over a fixed hypothesis universe (shared across sensors so
/// fusion matches by identity).
inline rfs::DeltaGlmbDensity random_delta_glmb(
    std::mt19937_64& rng,
    const std::vector<std::pair<rfs::LabelSet, std::string>>& universe) {
  std::uniform_real_distribution<double> wgt(0.1, 1.0);
  rfs::DeltaGlmbDensity d;
  double total = 0.0;
  for (const auto& [labels, assoc] : universe) {
    const double w = wgt(rng);
    d.hypotheses.push_back({labels, assoc, w});
    total += w;
    for (const auto& l : labels) d.trackDensities[{assoc, l}] = random_spd(rng);
  }
  for (auto& h : d.hypotheses) h.weight /= total;
  return d;
}

inline rfs::MglmbDensity random_mglmb(std::mt19937_64& rng,
                                      const std::vector<rfs::LabelSet>& universe) {
  std::uniform_real_distribution<double> wgt(0.1, 1.0);
  rfs::MglmbDensity d;
  double total = 0.0;
  for (const auto& labels : universe) {
    const double w = wgt(rng);
    d.hypotheses.push_back({labels, w});
    total += w;
    for (const auto& l : labels) d.trackDensities[{labels, l}] = random_spd(rng);
  }
  for (auto& h : d.hypotheses) h.weight /= total;
  return d;
}

inline rfs::GridDensity eval_grid_1d() { return rfs::GridDensity::uniform_1d(0.0, 12.0, 12); }

/// Max absolute per-cell difference between two grids.
inline double max_cell_diff(const rfs::GridDensity& a, const rfs::GridDensity& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace testutil
