#pragma once

#include "rfs/densities.hpp"
#include "rfs/grid.hpp"
#include "rfs/labeled.hpp"

#include <vector>

namespace rfs {

// ---- Analytic first-moment (intensity) extraction ----

GaussianMixture phd_of(const PoissonDensity& d);
GaussianMixture phd_of(const IidcDensity& d);
GaussianMixture phd_of(const BernoulliComponent& d);
GaussianMixture phd_of(const MultiBernoulli& d);
GaussianMixture phd_of(const MbMixture& d);

// Labeled intensity for one label. Unknown labels give the zero mixture.
GaussianMixture lphd_of(const LmbDensity& d, const Label& l);
GaussianMixture lphd_of(const DeltaGlmbDensity& d, const Label& l);
GaussianMixture lphd_of(const MglmbDensity& d, const Label& l);
GaussianMixture lphd_of(const GlmbDensity& d, const Label& l);

// ---- Cardinality distributions ----

CardinalityPmf cardinality_of(const PoissonDensity& d, int nMax = CardinalityPmf::kDefaultNMax);
CardinalityPmf cardinality_of(const IidcDensity& d);
CardinalityPmf cardinality_of(const BernoulliComponent& d);
CardinalityPmf cardinality_of(const MultiBernoulli& d);
CardinalityPmf cardinality_of(const MbMixture& d);

// ---- Exact multi-target density evaluation at a finite point set ----
// MB/MBM enumerate component-to-element assignments; cardinalities above
// nMaxEval are refused (oracle-scale usage only).

constexpr int kDefaultSetEvalNMax = 4;

double set_density_eval(const PoissonDensity& d, const std::vector<Eigen::VectorXd>& X);
double set_density_eval(const IidcDensity& d, const std::vector<Eigen::VectorXd>& X);
double set_density_eval(const BernoulliComponent& d, const std::vector<Eigen::VectorXd>& X);
double set_density_eval(const MultiBernoulli& d, const std::vector<Eigen::VectorXd>& X,
                        int nMaxEval = kDefaultSetEvalNMax);
double set_density_eval(const MbMixture& d, const std::vector<Eigen::VectorXd>& X,
                        int nMaxEval = kDefaultSetEvalNMax);

// ---- Brute-force intensity oracle ----
// Evaluates the first moment on a small grid directly from the set-level
// density: sums over all ordered tuples of grid points up to length nMax.
// Independent of the analytic phd_of path; grids above 12 points refused.

constexpr int kMaxOracleGridPoints = 12;

template <typename Density>
GridDensity brute_force_phd(const Density& d, const GridDensity& grid, int nMax);

}  // namespace rfs
