#include "rfs/moments.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rfs {

// ---- phd_of ----

GaussianMixture phd_of(const PoissonDensity& d) {
  GaussianMixture out(d.spd.dim());
  out.add_scaled(d.spd, d.rate);
  return out;
}

GaussianMixture phd_of(const IidcDensity& d) {
  GaussianMixture out(d.spd.dim());
  out.add_scaled(d.spd, d.cardinality.mean());
  return out;
}

GaussianMixture phd_of(const BernoulliComponent& d) {
  GaussianMixture out(d.spd.dim());
  out.add_scaled(d.spd, d.existence);
  return out;
}

GaussianMixture phd_of(const MultiBernoulli& d) {
  GaussianMixture out;
  for (const auto& bc : d.components) out.add_scaled(bc.spd, bc.existence);
  return out;
}

GaussianMixture phd_of(const MbMixture& d) {
  GaussianMixture out;
  for (const auto& h : d.hypotheses)
    for (const auto& bc : h.mb.components) out.add_scaled(bc.spd, h.weight * bc.existence);
  return out;
}

// ---- lphd_of ----

GaussianMixture lphd_of(const LmbDensity& d, const Label& l) {
  auto it = d.tracks.find(l);
  if (it == d.tracks.end()) return GaussianMixture();
  GaussianMixture out(it->second.spd.dim());
  out.add_scaled(it->second.spd, it->second.existence);
  return out;
}

GaussianMixture lphd_of(const DeltaGlmbDensity& d, const Label& l) {
  GaussianMixture out;
  for (const auto& h : d.hypotheses) {
    if (!h.labels.contains(l)) continue;
    auto it = d.trackDensities.find({h.assocId, l});
    if (it == d.trackDensities.end())
      throw std::invalid_argument("DeltaGlmb: missing track density for hypothesis label");
    out.add_scaled(it->second, h.weight);
  }
  return out;
}

GaussianMixture lphd_of(const MglmbDensity& d, const Label& l) {
  GaussianMixture out;
  for (const auto& h : d.hypotheses) {
    if (!h.labels.contains(l)) continue;
    auto it = d.trackDensities.find({h.labels, l});
    if (it == d.trackDensities.end())
      throw std::invalid_argument("Mglmb: missing track density for hypothesis label");
    out.add_scaled(it->second, h.weight);
  }
  return out;
}

GaussianMixture lphd_of(const GlmbDensity& d, const Label& l) {
  GaussianMixture out;
  for (const auto& c : d.indices) {
    const double marginal = d.label_marginal_weight(c, l);
    if (marginal <= 0.0) continue;
    auto it = d.trackDensities.find({c, l});
    if (it == d.trackDensities.end())
      throw std::invalid_argument("Glmb: missing track density for weighted label");
    out.add_scaled(it->second, marginal);
  }
  return out;
}

double GlmbDensity::label_marginal_weight(const std::string& c, const Label& l) const {
  double sum = 0.0;
  for (const auto& [key, w] : weights)
    if (key.first == c && key.second.contains(l)) sum += w;
  return sum;
}

LabelSet labels_of(const LmbDensity& d) {
  LabelSet ls;
  for (const auto& [l, bc] : d.tracks) ls.insert(l);
  return ls;
}

LabelSet labels_of(const DeltaGlmbDensity& d) {
  LabelSet ls;
  for (const auto& h : d.hypotheses) ls.insert(h.labels.begin(), h.labels.end());
  return ls;
}

LabelSet labels_of(const MglmbDensity& d) {
  LabelSet ls;
  for (const auto& h : d.hypotheses) ls.insert(h.labels.begin(), h.labels.end());
  return ls;
}

LabelSet labels_of(const GlmbDensity& d) {
  LabelSet ls;
  for (const auto& [key, w] : d.weights) ls.insert(key.second.begin(), key.second.end());
  return ls;
}

// ---- cardinality_of ----

CardinalityPmf cardinality_of(const PoissonDensity& d, int nMax) {
  return CardinalityPmf::poisson(d.rate, nMax);
}

CardinalityPmf cardinality_of(const IidcDensity& d) { return d.cardinality; }

CardinalityPmf cardinality_of(const BernoulliComponent& d) {
  return CardinalityPmf({1.0 - d.existence, d.existence}, false);
}

CardinalityPmf cardinality_of(const MultiBernoulli& d) {
  // Convolution of independent Bernoulli count variables.
  std::vector<double> p{1.0};
  for (const auto& bc : d.components) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t n = 0; n < p.size(); ++n) {
      q[n] += p[n] * (1.0 - bc.existence);
      q[n + 1] += p[n] * bc.existence;
    }
    p = std::move(q);
  }
  return CardinalityPmf(std::move(p), false);
}

CardinalityPmf cardinality_of(const MbMixture& d) {
  std::size_t maxLen = 1;
  for (const auto& h : d.hypotheses) maxLen = std::max(maxLen, h.mb.components.size() + 1);
  std::vector<double> p(maxLen, 0.0);
  const double total = d.total_weight();
  for (const auto& h : d.hypotheses) {
    const CardinalityPmf hp = cardinality_of(h.mb);
    for (int n = 0; n <= hp.n_max(); ++n) p[n] += h.weight / total * hp[n];
  }
  return CardinalityPmf(std::move(p), false);
}

// ---- set_density_eval ----

double set_density_eval(const PoissonDensity& d, const std::vector<Eigen::VectorXd>& X) {
  double v = std::exp(-d.rate);
  for (const auto& x : X) v *= d.rate * d.spd.eval(x);
  return v;
}

double set_density_eval(const IidcDensity& d, const std::vector<Eigen::VectorXd>& X) {
  const int n = static_cast<int>(X.size());
  double v = d.cardinality[n];
  for (int k = 2; k <= n; ++k) v *= k;  // n!
  for (const auto& x : X) v *= d.spd.eval(x);
  return v;
}

double set_density_eval(const BernoulliComponent& d, const std::vector<Eigen::VectorXd>& X) {
  if (X.empty()) return 1.0 - d.existence;
  if (X.size() == 1) return d.existence * d.spd.eval(X[0]);
  return 0.0;
}

namespace {

// Sum over injective assignments of the n set elements to distinct
// Bernoulli components: product of r_l s_l(x) for assigned components
// and (1 - r_l) for the rest.
double mb_eval_recursive(const MultiBernoulli& mb, const std::vector<Eigen::VectorXd>& X,
                         std::size_t elem, std::vector<bool>& used) {
  if (elem == X.size()) {
    double v = 1.0;
    for (std::size_t l = 0; l < mb.components.size(); ++l)
      if (!used[l]) v *= 1.0 - mb.components[l].existence;
    return v;
  }
  double sum = 0.0;
  for (std::size_t l = 0; l < mb.components.size(); ++l) {
    if (used[l]) continue;
    const auto& bc = mb.components[l];
    if (bc.existence <= 0.0) continue;
    used[l] = true;
    sum += bc.existence * bc.spd.eval(X[elem]) * mb_eval_recursive(mb, X, elem + 1, used);
    used[l] = false;
  }
  return sum;
}

}  // namespace

double set_density_eval(const MultiBernoulli& d, const std::vector<Eigen::VectorXd>& X,
                        int nMaxEval) {
  if (static_cast<int>(X.size()) > nMaxEval)
    throw std::invalid_argument("set_density_eval(MB): cardinality above enumeration limit");
  if (X.size() > d.components.size()) return 0.0;
  std::vector<bool> used(d.components.size(), false);
  return mb_eval_recursive(d, X, 0, used);
}

double set_density_eval(const MbMixture& d, const std::vector<Eigen::VectorXd>& X, int nMaxEval) {
  if (static_cast<int>(X.size()) > nMaxEval)
    throw std::invalid_argument("set_density_eval(MBM): cardinality above enumeration limit");
  const double total = d.total_weight();
  double v = 0.0;
  for (const auto& h : d.hypotheses) v += h.weight / total * set_density_eval(h.mb, X, nMaxEval);
  return v;
}

// ---- brute_force_phd ----

namespace {

template <typename Density>
GridDensity brute_force_phd_impl(const Density& d, const GridDensity& grid, int nMax) {
  const std::size_t G = grid.points.size();
  if (static_cast<int>(G) > kMaxOracleGridPoints)
    throw std::invalid_argument("brute_force_phd: grid too large for combinatorial oracle");

  GridDensity out = grid;
  std::fill(out.values.begin(), out.values.end(), 0.0);

  // Enumerate ordered tuples (i_1..i_n) of grid indices; the 1/n! of the
  // set-integral expansion cancels the tuple-order overcount.
  std::vector<int> idx;
  std::vector<Eigen::VectorXd> X;
  std::function<void(int)> walk = [&](int remaining) {
    if (!idx.empty()) {
      double factorial = 1.0;
      for (std::size_t k = 2; k <= idx.size(); ++k) factorial *= k;
      const double f = set_density_eval(d, X) *
                       std::pow(grid.cellVolume, static_cast<double>(idx.size())) / factorial;
      if (f != 0.0)
        for (int i : idx) out.values[i] += f / grid.cellVolume;
    }
    if (remaining == 0) return;
    for (std::size_t g = 0; g < G; ++g) {
      idx.push_back(static_cast<int>(g));
      X.push_back(grid.points[g]);
      walk(remaining - 1);
      idx.pop_back();
      X.pop_back();
    }
  };
  walk(nMax);
  return out;
}

}  // namespace

template <typename Density>
GridDensity brute_force_phd(const Density& d, const GridDensity& grid, int nMax) {
  return brute_force_phd_impl(d, grid, nMax);
}

template GridDensity brute_force_phd<PoissonDensity>(const PoissonDensity&, const GridDensity&, int);
template GridDensity brute_force_phd<IidcDensity>(const IidcDensity&, const GridDensity&, int);
template GridDensity brute_force_phd<BernoulliComponent>(const BernoulliComponent&,
                                                         const GridDensity&, int);
template GridDensity brute_force_phd<MultiBernoulli>(const MultiBernoulli&, const GridDensity&, int);
template GridDensity brute_force_phd<MbMixture>(const MbMixture&, const GridDensity&, int);

void MbMixture::normalize_weights() {
  const double total = total_weight();
  if (total <= 0.0) throw std::invalid_argument("MbMixture: zero total hypothesis weight");
  for (auto& h : hypotheses) h.weight /= total;
}

}  // namespace rfs
