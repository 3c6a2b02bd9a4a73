#pragma once

#include "rfs/densities.hpp"
#include "rfs/grid.hpp"
#include "rfs/labeled.hpp"

#include <vector>

namespace rfs {

/// Point on the open probability simplex over sensors.
class FusionWeights {
public:
  static FusionWeights uniform(int count);
  explicit FusionWeights(std::vector<double> w);

  int size() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }

private:
  std::vector<double> w_;
};

// Chi-square 99% quantile, 2 dof: default association gate.
constexpr double kDefaultAssociationGate = 9.21;

/// Cross-sensor grouping of Bernoulli components: each group holds at
/// most one component per sensor; every input component lands in
/// exactly one group.
struct AssociationResult {
  struct Member {
    int sensor;
    int component;
  };
  std::vector<std::vector<Member>> groups;
};

// ---- Arithmetic-average fusion rules ----

/// Exact mixture average: concatenates components with sensor weights.
GaussianMixture aa_gm(const std::vector<GaussianMixture>& mixtures, const FusionWeights& w);

/// Pointwise convex combination of cardinality pmfs.
CardinalityPmf aa_cardinality(const std::vector<CardinalityPmf>& pmfs, const FusionWeights& w);

PoissonDensity fuse_poisson(const std::vector<PoissonDensity>& ds, const FusionWeights& w);
IidcDensity fuse_iidc(const std::vector<IidcDensity>& ds, const FusionWeights& w);
BernoulliComponent fuse_bernoulli(const std::vector<BernoulliComponent>& bcs,
                                  const FusionWeights& w);

/// Greedy gated grouping of Bernoulli components across sensors by
/// squared Mahalanobis distance to the running group mean.
AssociationResult associate_components(const std::vector<MultiBernoulli>& mbs, double gate);

MultiBernoulli fuse_mb(const std::vector<MultiBernoulli>& mbs, const FusionWeights& w,
                       double gate = kDefaultAssociationGate);
MbMixture fuse_mbm(const std::vector<MbMixture>& mbms, const FusionWeights& w, int topK);

LmbDensity fuse_lmb(const std::vector<LmbDensity>& lmbs, const FusionWeights& w);
DeltaGlmbDensity fuse_delta_glmb(const std::vector<DeltaGlmbDensity>& ds, const FusionWeights& w);
MglmbDensity fuse_mglmb(const std::vector<MglmbDensity>& ds, const FusionWeights& w);
GlmbDensity fuse_glmb(const std::vector<GlmbDensity>& ds, const FusionWeights& w);

/// delta-GLMB expressed as a general GLMB with one index per hypothesis
/// pair (label set, association history).
GlmbDensity as_glmb(const DeltaGlmbDensity& d);

/// Geometric-average baseline on a common grid: normalized weighted
/// geometric mean. Returns an all-zero grid when supports are disjoint.
GridDensity ga_fuse_grid(const std::vector<GridDensity>& ps, const FusionWeights& w);

/// Fusion-weight optimization: maximizes sum_i w_i KL(f_i || f_AA(w))
/// by projected gradient ascent on the simplex. Falls back to uniform
/// weights when any divergence is non-finite.
FusionWeights bfom_weights(const std::vector<GridDensity>& ps, double step = 0.1,
                           int iterations = 200, double clipFloor = 1e-4);

/// The BFoM objective itself, for a fixed candidate g.
double bfom_objective(const std::vector<GridDensity>& ps, const FusionWeights& w,
                      const GridDensity& g);

}  // namespace rfs
