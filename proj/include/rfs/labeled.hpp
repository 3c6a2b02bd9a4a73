#pragma once

#include "rfs/densities.hpp"
#include "rfs/gaussian.hpp"

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace rfs {

/// Track label (birth time; birth index), totally ordered.
struct Label {
  int birthTime = 0;
  int birthIndex = 0;

  auto operator<=>(const Label&) const = default;
};

using LabelSet = std::set<Label>;

/// Labeled multi-Bernoulli: one Bernoulli component per label.
struct LmbDensity {
  std::map<Label, BernoulliComponent> tracks;
};

/// delta-GLMB: hypotheses (label set, association-history id, weight) with
/// per-(history, label) track densities. The association history is opaque;
/// fusion only ever compares it for equality.
struct DeltaGlmbDensity {
  struct Hypothesis {
    LabelSet labels;
    std::string assocId;
    double weight = 0.0;
  };
  std::vector<Hypothesis> hypotheses;
  std::map<std::pair<std::string, Label>, GaussianMixture> trackDensities;

  double total_weight() const {
    double s = 0.0;
    for (const auto& h : hypotheses) s += h.weight;
    return s;
  }
};

/// Marginalized GLMB: per-label-set weights and track densities.
struct MglmbDensity {
  struct Hypothesis {
    LabelSet labels;
    double weight = 0.0;
  };
  std::vector<Hypothesis> hypotheses;
  std::map<std::pair<LabelSet, Label>, GaussianMixture> trackDensities;
};

/// General GLMB with an opaque index set C.
struct GlmbDensity {
  std::vector<std::string> indices;
  std::map<std::pair<std::string, LabelSet>, double> weights;
  std::map<std::pair<std::string, Label>, GaussianMixture> trackDensities;

  /// Sum over label sets containing l of the weight under index c.
  double label_marginal_weight(const std::string& c, const Label& l) const;
};

/// Union of all labels appearing anywhere in the density.
LabelSet labels_of(const LmbDensity& d);
LabelSet labels_of(const DeltaGlmbDensity& d);
LabelSet labels_of(const MglmbDensity& d);
LabelSet labels_of(const GlmbDensity& d);

}  // namespace rfs
