#pragma once

#include "rfs/cardinality.hpp"
#include "rfs/gaussian.hpp"

#include <vector>

namespace rfs {

/// Poisson RFS: rate lambda plus normalized spatial density.
struct PoissonDensity {
  double rate = 0.0;
  GaussianMixture spd;  // unit mass
};

/// IIDC RFS: arbitrary cardinality pmf, elements i.i.d. with the spd.
struct IidcDensity {
  CardinalityPmf cardinality;
  GaussianMixture spd;  // unit mass
};

/// Bernoulli component: at most one target, existence probability r.
struct BernoulliComponent {
  double existence = 0.0;  // in [0, 1]
  GaussianMixture spd;     // unit mass (may be empty when existence == 0)
};

/// Independent union of Bernoulli components.
struct MultiBernoulli {
  std::vector<BernoulliComponent> components;
};

/// Weighted mixture of multi-Bernoulli hypotheses.
struct MbMixture {
  struct Hypothesis {
    double weight = 0.0;
    MultiBernoulli mb;
  };
  std::vector<Hypothesis> hypotheses;

  double total_weight() const {
    double s = 0.0;
    for (const auto& h : hypotheses) s += h.weight;
    return s;
  }
  void normalize_weights();
};

}  // namespace rfs
