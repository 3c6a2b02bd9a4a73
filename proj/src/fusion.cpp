#include "rfs/fusion.hpp"

#include "rfs/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace rfs {

FusionWeights FusionWeights::uniform(int count) {
  if (count < 1) throw std::invalid_argument("FusionWeights: empty sensor set");
  return FusionWeights(std::vector<double>(count, 1.0 / count));
}

FusionWeights::FusionWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty()) throw std::invalid_argument("FusionWeights: empty sensor set");
  double sum = 0.0;
  for (double wi : w_) {
    if (wi <= 0.0) throw std::invalid_argument("FusionWeights: weights must be positive");
    sum += wi;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("FusionWeights: weights must sum to 1");
}

GaussianMixture aa_gm(const std::vector<GaussianMixture>& mixtures, const FusionWeights& w) {
  if (static_cast<int>(mixtures.size()) != w.size())
    throw std::invalid_argument("aa_gm: sensor count mismatch");
  GaussianMixture out;
  for (std::size_t i = 0; i < mixtures.size(); ++i)
    out.add_scaled(mixtures[i], w[static_cast<int>(i)]);
  return out;
}

CardinalityPmf aa_cardinality(const std::vector<CardinalityPmf>& pmfs, const FusionWeights& w) {
  if (static_cast<int>(pmfs.size()) != w.size())
    throw std::invalid_argument("aa_cardinality: sensor count mismatch");
  int nMax = 0;
  for (const auto& p : pmfs) nMax = std::max(nMax, p.n_max());
  std::vector<double> fused(nMax + 1, 0.0);
  for (std::size_t i = 0; i < pmfs.size(); ++i)
    for (int n = 0; n <= pmfs[i].n_max(); ++n) fused[n] += w[static_cast<int>(i)] * pmfs[i][n];
  return CardinalityPmf(std::move(fused), false);
}

PoissonDensity fuse_poisson(const std::vector<PoissonDensity>& ds, const FusionWeights& w) {
  if (static_cast<int>(ds.size()) != w.size())
    throw std::invalid_argument("fuse_poisson: sensor count mismatch");
  PoissonDensity out;
  GaussianMixture intensity;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.rate += w[static_cast<int>(i)] * ds[i].rate;
    if (ds[i].rate > 0.0) intensity.add_scaled(ds[i].spd, w[static_cast<int>(i)] * ds[i].rate);
  }
  out.spd = intensity.normalized();
  return out;
}

IidcDensity fuse_iidc(const std::vector<IidcDensity>& ds, const FusionWeights& w) {
  if (static_cast<int>(ds.size()) != w.size())
    throw std::invalid_argument("fuse_iidc: sensor count mismatch");
  IidcDensity out;
  std::vector<CardinalityPmf> pmfs;
  for (const auto& d : ds) pmfs.push_back(d.cardinality);
  out.cardinality = aa_cardinality(pmfs, w);

  const double nAA = out.cardinality.mean();
  GaussianMixture intensity;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double ni = ds[i].cardinality.mean();
    if (ni > 0.0) intensity.add_scaled(ds[i].spd, w[static_cast<int>(i)] * ni);
  }
  if (nAA > 0.0) intensity.rescale_mass(1.0);
  out.spd = intensity;
  return out;
}

BernoulliComponent fuse_bernoulli(const std::vector<BernoulliComponent>& bcs,
                                  const FusionWeights& w) {
  if (static_cast<int>(bcs.size()) != w.size())
    throw std::invalid_argument("fuse_bernoulli: sensor count mismatch");
  BernoulliComponent out;
  GaussianMixture intensity;
  for (std::size_t i = 0; i < bcs.size(); ++i) {
    out.existence += w[static_cast<int>(i)] * bcs[i].existence;
    if (bcs[i].existence > 0.0)
      intensity.add_scaled(bcs[i].spd, w[static_cast<int>(i)] * bcs[i].existence);
  }
  if (out.existence > 0.0) intensity.rescale_mass(1.0);
  out.spd = intensity;
  return out;
}

namespace {

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

Moments moment_match(const GaussianMixture& gm) {
  const double m = gm.mass();
  Moments out;
  out.mean = Eigen::VectorXd::Zero(gm.dim());
  for (const auto& c : gm.components()) out.mean += c.weight / m * c.mean;
  out.cov = Eigen::MatrixXd::Zero(gm.dim(), gm.dim());
  for (const auto& c : gm.components()) {
    const Eigen::VectorXd d = c.mean - out.mean;
    out.cov += c.weight / m * (c.cov + d * d.transpose());
  }
  return out;
}

}  // namespace

AssociationResult associate_components(const std::vector<MultiBernoulli>& mbs, double gate) {
  if (gate <= 0.0) throw std::invalid_argument("associate_components: gate must be positive");
  AssociationResult result;
  std::vector<Moments> groupMoments;          // moment-matched per group
  std::vector<std::vector<int>> groupSensors; // sensors already in each group

  for (std::size_t i = 0; i < mbs.size(); ++i) {
    for (std::size_t j = 0; j < mbs[i].components.size(); ++j) {
      const auto& bc = mbs[i].components[j];
      const Moments bm = moment_match(bc.spd);

      int best = -1;
      double bestDist = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < result.groups.size(); ++g) {
        const auto& sensors = groupSensors[g];
        if (std::find(sensors.begin(), sensors.end(), static_cast<int>(i)) != sensors.end())
          continue;
        const Eigen::VectorXd d = bm.mean - groupMoments[g].mean;
        const Eigen::MatrixXd S = groupMoments[g].cov + bm.cov;
        const double dist = d.dot(S.llt().solve(d));
        if (dist <= gate && dist < bestDist) {
          bestDist = dist;
          best = static_cast<int>(g);
        }
      }
      if (best < 0) {
        result.groups.push_back({{static_cast<int>(i), static_cast<int>(j)}});
        groupMoments.push_back(bm);
        groupSensors.push_back({static_cast<int>(i)});
      } else {
        result.groups[best].push_back({static_cast<int>(i), static_cast<int>(j)});
        groupSensors[best].push_back(static_cast<int>(i));
        // Refresh the group moments over all members, equally weighted.
        GaussianMixture pooled;
        for (const auto& m : result.groups[best])
          pooled.add_scaled(mbs[m.sensor].components[m.component].spd, 1.0);
        groupMoments[best] = moment_match(pooled);
      }
    }
  }
  return result;
}

MultiBernoulli fuse_mb(const std::vector<MultiBernoulli>& mbs, const FusionWeights& w,
                       double gate) {
  if (static_cast<int>(mbs.size()) != w.size())
    throw std::invalid_argument("fuse_mb: sensor count mismatch");
  const AssociationResult assoc = associate_components(mbs, gate);
  MultiBernoulli out;
  out.components.resize(assoc.groups.size());
  // Weights are NOT renormalized within a group: a sensor missing from a
  // group contributes existence 0, so singleton groups carry w_i * r.
  for (std::size_t g = 0; g < assoc.groups.size(); ++g) {
    std::vector<BernoulliComponent> perSensor(mbs.size());
    for (const auto& m : assoc.groups[g]) perSensor[m.sensor] = mbs[m.sensor].components[m.component];
    BernoulliComponent fused = fuse_bernoulli(perSensor, w);
    if (fused.existence > 1.0 + 1e-12)
      throw std::logic_error("fuse_mb: fused existence above 1");
    out.components[g] = std::move(fused);
  }
  return out;
}

MbMixture fuse_mbm(const std::vector<MbMixture>& mbms, const FusionWeights& w, int topK) {
  if (static_cast<int>(mbms.size()) != w.size())
    throw std::invalid_argument("fuse_mbm: sensor count mismatch");
  if (topK < 1) throw std::invalid_argument("fuse_mbm: topK must be >= 1");

  MbMixture out;
  for (std::size_t i = 0; i < mbms.size(); ++i) {
    std::vector<MbMixture::Hypothesis> hyps = mbms[i].hypotheses;
    std::sort(hyps.begin(), hyps.end(),
              [](const auto& a, const auto& b) { return a.weight > b.weight; });
    if (static_cast<int>(hyps.size()) > topK) hyps.resize(topK);
    double kept = 0.0;
    for (const auto& h : hyps) kept += h.weight;
    for (auto& h : hyps) {
      h.weight = w[static_cast<int>(i)] * h.weight / kept;
      out.hypotheses.push_back(std::move(h));
    }
  }
  out.normalize_weights();
  return out;
}

LmbDensity fuse_lmb(const std::vector<LmbDensity>& lmbs, const FusionWeights& w) {
  if (static_cast<int>(lmbs.size()) != w.size())
    throw std::invalid_argument("fuse_lmb: sensor count mismatch");
  LabelSet all;
  for (const auto& d : lmbs) {
    const LabelSet ls = labels_of(d);
    all.insert(ls.begin(), ls.end());
  }
  LmbDensity out;
  for (const Label& l : all) {
    std::vector<BernoulliComponent> perSensor(lmbs.size());
    for (std::size_t i = 0; i < lmbs.size(); ++i) {
      auto it = lmbs[i].tracks.find(l);
      if (it != lmbs[i].tracks.end()) perSensor[i] = it->second;
    }
    out.tracks[l] = fuse_bernoulli(perSensor, w);
  }
  return out;
}

DeltaGlmbDensity fuse_delta_glmb(const std::vector<DeltaGlmbDensity>& ds, const FusionWeights& w) {
  if (static_cast<int>(ds.size()) != w.size())
    throw std::invalid_argument("fuse_delta_glmb: sensor count mismatch");

  // Hypotheses matched by (label set, association history) equality.
  std::map<std::pair<LabelSet, std::string>, double> fusedWeights;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (const auto& h : ds[i].hypotheses)
      fusedWeights[{h.labels, h.assocId}] += w[static_cast<int>(i)] * h.weight;

  DeltaGlmbDensity out;
  double total = 0.0;
  for (const auto& [key, weight] : fusedWeights) {
    if (weight <= 0.0) continue;
    out.hypotheses.push_back({key.first, key.second, weight});
    total += weight;
  }
  for (auto& h : out.hypotheses) h.weight /= total;

  // Fused track density per (history, label) with hypothesis-weight
  // coefficients, marginalized over label sets within the history.
  std::map<std::pair<std::string, Label>, GaussianMixture> fusedTracks;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::map<std::pair<std::string, Label>, double> marginal;
    for (const auto& h : ds[i].hypotheses)
      for (const Label& l : h.labels) marginal[{h.assocId, l}] += h.weight;
    for (const auto& [key, m] : marginal) {
      if (m <= 0.0) continue;
      auto it = ds[i].trackDensities.find(key);
      if (it == ds[i].trackDensities.end())
        throw std::invalid_argument("fuse_delta_glmb: missing track density");
      fusedTracks[key].add_scaled(it->second, w[static_cast<int>(i)] * m);
    }
  }
  for (auto& [key, gm] : fusedTracks) {
    gm.rescale_mass(1.0);
    out.trackDensities[key] = std::move(gm);
  }
  return out;
}

MglmbDensity fuse_mglmb(const std::vector<MglmbDensity>& ds, const FusionWeights& w) {
  if (static_cast<int>(ds.size()) != w.size())
    throw std::invalid_argument("fuse_mglmb: sensor count mismatch");

  std::map<LabelSet, double> fusedWeights;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (const auto& h : ds[i].hypotheses)
      fusedWeights[h.labels] += w[static_cast<int>(i)] * h.weight;

  MglmbDensity out;
  double total = 0.0;
  for (const auto& [labels, weight] : fusedWeights) {
    if (weight <= 0.0) continue;
    out.hypotheses.push_back({labels, weight});
    total += weight;
  }
  for (auto& h : out.hypotheses) h.weight /= total;

  std::map<std::pair<LabelSet, Label>, GaussianMixture> fusedTracks;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (const auto& h : ds[i].hypotheses) {
      if (h.weight <= 0.0) continue;
      for (const Label& l : h.labels) {
        auto it = ds[i].trackDensities.find({h.labels, l});
        if (it == ds[i].trackDensities.end())
          throw std::invalid_argument("fuse_mglmb: missing track density");
        fusedTracks[{h.labels, l}].add_scaled(it->second, w[static_cast<int>(i)] * h.weight);
      }
    }
  }
  for (auto& [key, gm] : fusedTracks) {
    gm.rescale_mass(1.0);
    out.trackDensities[key] = std::move(gm);
  }
  return out;
}

GlmbDensity fuse_glmb(const std::vector<GlmbDensity>& ds, const FusionWeights& w) {
  if (static_cast<int>(ds.size()) != w.size())
    throw std::invalid_argument("fuse_glmb: sensor count mismatch");

  GlmbDensity out;
  std::map<std::pair<std::string, LabelSet>, double> fusedWeights;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (const auto& [key, weight] : ds[i].weights)
      fusedWeights[key] += w[static_cast<int>(i)] * weight;
  double total = 0.0;
  for (const auto& [key, weight] : fusedWeights) total += weight;
  for (const auto& [key, weight] : fusedWeights) {
    if (weight <= 0.0) continue;
    out.weights[key] = weight / total;
    if (std::find(out.indices.begin(), out.indices.end(), key.first) == out.indices.end())
      out.indices.push_back(key.first);
  }

  // Track densities fused with the label-marginal coefficient
  // w_i * sum_{L containing l} omega_i^{(c)}(L).
  std::map<std::pair<std::string, Label>, GaussianMixture> fusedTracks;
  std::map<std::pair<std::string, Label>, double> coeffSums;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::map<std::pair<std::string, Label>, double> marginal;
    for (const auto& [key, weight] : ds[i].weights)
      for (const Label& l : key.second) marginal[{key.first, l}] += weight;
    for (const auto& [key, m] : marginal) {
      if (m <= 0.0) continue;
      auto it = ds[i].trackDensities.find(key);
      if (it == ds[i].trackDensities.end())
        throw std::invalid_argument("fuse_glmb: missing track density");
      fusedTracks[key].add_scaled(it->second, w[static_cast<int>(i)] * m);
      coeffSums[key] += w[static_cast<int>(i)] * m;
    }
  }
  for (auto& [key, gm] : fusedTracks) {
    if (coeffSums[key] <= 0.0) continue;  // zero fused marginal: track dropped
    gm.rescale_mass(1.0);
    out.trackDensities[key] = std::move(gm);
  }
  return out;
}

GlmbDensity as_glmb(const DeltaGlmbDensity& d) {
  GlmbDensity out;
  for (std::size_t h = 0; h < d.hypotheses.size(); ++h) {
    const auto& hyp = d.hypotheses[h];
    std::string c = hyp.assocId + "|L{";
    for (const Label& l : hyp.labels)
      c += std::to_string(l.birthTime) + ";" + std::to_string(l.birthIndex) + ",";
    c += "}";
    out.indices.push_back(c);
    out.weights[{c, hyp.labels}] = hyp.weight;
    for (const Label& l : hyp.labels) {
      auto it = d.trackDensities.find({hyp.assocId, l});
      if (it == d.trackDensities.end())
        throw std::invalid_argument("as_glmb: missing track density");
      out.trackDensities[{c, l}] = it->second;
    }
  }
  return out;
}

GridDensity ga_fuse_grid(const std::vector<GridDensity>& ps, const FusionWeights& w) {
  if (static_cast<int>(ps.size()) != w.size())
    throw std::invalid_argument("ga_fuse_grid: sensor count mismatch");
  for (std::size_t i = 1; i < ps.size(); ++i)
    if (!ps[i].same_grid_as(ps[0])) throw std::invalid_argument("ga_fuse_grid: grid mismatch");

  GridDensity out = ps[0];
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    double logv = 0.0;
    bool zero = false;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (ps[i].values[k] <= 0.0) {
        zero = true;
        break;
      }
      logv += w[static_cast<int>(i)] * std::log(ps[i].values[k]);
    }
    out.values[k] = zero ? 0.0 : std::exp(logv);
  }
  out.normalize();  // all-zero product stays all-zero (degenerate)
  return out;
}

double bfom_objective(const std::vector<GridDensity>& ps, const FusionWeights& w,
                      const GridDensity& g) {
  double obj = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) obj += w[static_cast<int>(i)] * kl_grid(ps[i], g);
  return obj;
}

FusionWeights bfom_weights(const std::vector<GridDensity>& ps, double step, int iterations,
                           double clipFloor) {
  const int I = static_cast<int>(ps.size());
  if (I < 2) throw std::invalid_argument("bfom_weights: need at least two densities");

  std::vector<double> w(I, 1.0 / I);
  std::vector<double> best = w;
  double bestObj = -std::numeric_limits<double>::infinity();

  for (int it = 0; it <= iterations; ++it) {
    FusionWeights fw(w);
    GridDensity mix = ps[0];
    for (std::size_t k = 0; k < mix.values.size(); ++k) {
      double v = 0.0;
      for (int i = 0; i < I; ++i) v += fw[i] * ps[i].values[k];
      mix.values[k] = v;
    }
    std::vector<double> grad(I);
    double obj = 0.0;
    for (int i = 0; i < I; ++i) {
      grad[i] = kl_grid(ps[i], mix);
      if (!std::isfinite(grad[i])) return FusionWeights::uniform(I);  // disjoint support
      obj += w[i] * grad[i];
    }
    if (obj > bestObj) {
      bestObj = obj;
      best = w;
    }
    if (it == iterations) break;
    // Ascend along the simplex tangent component of the gradient, then
    // clip to the open simplex and renormalize. Interior fixed points
    // have equal divergences, the stationarity condition.
    double mean = 0.0;
    for (int i = 0; i < I; ++i) mean += grad[i] / I;
    double sum = 0.0;
    for (int i = 0; i < I; ++i) {
      w[i] = std::max(w[i] + step * (grad[i] - mean), clipFloor);
      sum += w[i];
    }
    for (int i = 0; i < I; ++i) w[i] /= sum;
  }
  return FusionWeights(best);
}

}  // namespace rfs
