#include "rfs/serialization.hpp"

#include <stdexcept>

namespace rfs {

using nlohmann::json;

namespace {

json header(const char* family) {
  return json{{"schema", kDensitySchema}, {"family", family}};
}

void check(const json& j, const char* family) {
  if (j.value("schema", "") != kDensitySchema)
    throw std::invalid_argument("density json: unsupported schema");
  if (j.value("family", "") != family)
    throw std::invalid_argument(std::string("density json: expected family ") + family);
}

json gm_body(const GaussianMixture& gm) {
  json comps = json::array();
  for (const auto& c : gm.components()) {
    std::vector<double> cov;
    for (int r = 0; r < c.dim(); ++r)
      for (int k = 0; k < c.dim(); ++k) cov.push_back(c.cov(r, k));
    comps.push_back({{"weight", c.weight},
                     {"mean", std::vector<double>(c.mean.data(), c.mean.data() + c.dim())},
                     {"cov", cov}});
  }
  return json{{"dim", gm.dim()}, {"components", comps}};
}

GaussianMixture gm_from_body(const json& j) {
  const int dim = j.at("dim").get<int>();
  GaussianMixture gm(dim);
  for (const auto& cj : j.at("components")) {
    Eigen::VectorXd mean(dim);
    const auto mv = cj.at("mean").get<std::vector<double>>();
    if (static_cast<int>(mv.size()) != dim)
      throw std::invalid_argument("density json: mean length mismatch");
    for (int i = 0; i < dim; ++i) mean(i) = mv[i];
    const auto cv = cj.at("cov").get<std::vector<double>>();
    if (static_cast<int>(cv.size()) != dim * dim)
      throw std::invalid_argument("density json: covariance length mismatch");
    Eigen::MatrixXd cov(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int k = 0; k < dim; ++k) cov(r, k) = cv[r * dim + k];
    gm.add(GaussianComponent(cj.at("weight").get<double>(), std::move(mean), std::move(cov)));
  }
  return gm;
}

json label_to_json(const Label& l) { return json{l.birthTime, l.birthIndex}; }

Label label_from_json(const json& j) { return Label{j.at(0).get<int>(), j.at(1).get<int>()}; }

json labelset_to_json(const LabelSet& ls) {
  json out = json::array();
  for (const Label& l : ls) out.push_back(label_to_json(l));
  return out;
}

LabelSet labelset_from_json(const json& j) {
  LabelSet ls;
  for (const auto& lj : j) ls.insert(label_from_json(lj));
  return ls;
}

}  // namespace

json to_json(const GaussianMixture& gm) {
  json j = header("gm");
  j.update(gm_body(gm));
  return j;
}

GaussianMixture gm_from_json(const json& j) {
  check(j, "gm");
  return gm_from_body(j);
}

json to_json(const PoissonDensity& d) {
  json j = header("poisson");
  j["rate"] = d.rate;
  j["spd"] = gm_body(d.spd);
  return j;
}

PoissonDensity poisson_from_json(const json& j) {
  check(j, "poisson");
  return PoissonDensity{j.at("rate").get<double>(), gm_from_body(j.at("spd"))};
}

json to_json(const IidcDensity& d) {
  json j = header("iidc");
  j["cardinality"] = d.cardinality.probs();
  j["spd"] = gm_body(d.spd);
  return j;
}

IidcDensity iidc_from_json(const json& j) {
  check(j, "iidc");
  return IidcDensity{CardinalityPmf(j.at("cardinality").get<std::vector<double>>(), false),
                     gm_from_body(j.at("spd"))};
}

json to_json(const BernoulliComponent& d) {
  json j = header("bernoulli");
  j["existence"] = d.existence;
  j["spd"] = gm_body(d.spd);
  return j;
}

BernoulliComponent bernoulli_from_json(const json& j) {
  check(j, "bernoulli");
  return BernoulliComponent{j.at("existence").get<double>(), gm_from_body(j.at("spd"))};
}

json to_json(const MultiBernoulli& d) {
  json j = header("mb");
  json comps = json::array();
  for (const auto& bc : d.components)
    comps.push_back({{"existence", bc.existence}, {"spd", gm_body(bc.spd)}});
  j["components"] = comps;
  return j;
}

MultiBernoulli mb_from_json(const json& j) {
  check(j, "mb");
  MultiBernoulli mb;
  for (const auto& cj : j.at("components"))
    mb.components.push_back(
        {cj.at("existence").get<double>(), gm_from_body(cj.at("spd"))});
  return mb;
}

json to_json(const MbMixture& d) {
  json j = header("mbm");
  json hyps = json::array();
  for (const auto& h : d.hypotheses) {
    json comps = json::array();
    for (const auto& bc : h.mb.components)
      comps.push_back({{"existence", bc.existence}, {"spd", gm_body(bc.spd)}});
    hyps.push_back({{"weight", h.weight}, {"components", comps}});
  }
  j["hypotheses"] = hyps;
  return j;
}

MbMixture mbm_from_json(const json& j) {
  check(j, "mbm");
  MbMixture out;
  for (const auto& hj : j.at("hypotheses")) {
    MbMixture::Hypothesis h;
    h.weight = hj.at("weight").get<double>();
    for (const auto& cj : hj.at("components"))
      h.mb.components.push_back(
          {cj.at("existence").get<double>(), gm_from_body(cj.at("spd"))});
    out.hypotheses.push_back(std::move(h));
  }
  return out;
}

json to_json(const LmbDensity& d) {
  json j = header("lmb");
  json tracks = json::array();
  for (const auto& [l, bc] : d.tracks)
    tracks.push_back({{"label", label_to_json(l)},
                      {"existence", bc.existence},
                      {"spd", gm_body(bc.spd)}});
  j["tracks"] = tracks;
  return j;
}

LmbDensity lmb_from_json(const json& j) {
  check(j, "lmb");
  LmbDensity out;
  for (const auto& tj : j.at("tracks"))
    out.tracks[label_from_json(tj.at("label"))] = {tj.at("existence").get<double>(),
                                                   gm_from_body(tj.at("spd"))};
  return out;
}

json to_json(const DeltaGlmbDensity& d) {
  json j = header("delta-glmb");
  json hyps = json::array();
  for (const auto& h : d.hypotheses)
    hyps.push_back({{"labels", labelset_to_json(h.labels)},
                    {"assoc_id", h.assocId},
                    {"weight", h.weight}});
  j["hypotheses"] = hyps;
  json tracks = json::array();
  for (const auto& [key, gm] : d.trackDensities)
    tracks.push_back({{"assoc_id", key.first},
                      {"label", label_to_json(key.second)},
                      {"spd", gm_body(gm)}});
  j["track_densities"] = tracks;
  return j;
}

DeltaGlmbDensity delta_glmb_from_json(const json& j) {
  check(j, "delta-glmb");
  DeltaGlmbDensity out;
  for (const auto& hj : j.at("hypotheses"))
    out.hypotheses.push_back({labelset_from_json(hj.at("labels")),
                              hj.at("assoc_id").get<std::string>(),
                              hj.at("weight").get<double>()});
  for (const auto& tj : j.at("track_densities"))
    out.trackDensities[{tj.at("assoc_id").get<std::string>(),
                        label_from_json(tj.at("label"))}] = gm_from_body(tj.at("spd"));
  return out;
}

json to_json(const MglmbDensity& d) {
  json j = header("m-glmb");
  json hyps = json::array();
  for (const auto& h : d.hypotheses)
    hyps.push_back({{"labels", labelset_to_json(h.labels)}, {"weight", h.weight}});
  j["hypotheses"] = hyps;
  json tracks = json::array();
  for (const auto& [key, gm] : d.trackDensities)
    tracks.push_back({{"labels", labelset_to_json(key.first)},
                      {"label", label_to_json(key.second)},
                      {"spd", gm_body(gm)}});
  j["track_densities"] = tracks;
  return j;
}

MglmbDensity mglmb_from_json(const json& j) {
  check(j, "m-glmb");
  MglmbDensity out;
  for (const auto& hj : j.at("hypotheses"))
    out.hypotheses.push_back(
        {labelset_from_json(hj.at("labels")), hj.at("weight").get<double>()});
  for (const auto& tj : j.at("track_densities"))
    out.trackDensities[{labelset_from_json(tj.at("labels")),
                        label_from_json(tj.at("label"))}] = gm_from_body(tj.at("spd"));
  return out;
}

json to_json(const GlmbDensity& d) {
  json j = header("glmb");
  j["indices"] = d.indices;
  json weights = json::array();
  for (const auto& [key, w] : d.weights)
    weights.push_back({{"index", key.first},
                       {"labels", labelset_to_json(key.second)},
                       {"weight", w}});
  j["weights"] = weights;
  json tracks = json::array();
  for (const auto& [key, gm] : d.trackDensities)
    tracks.push_back({{"index", key.first},
                      {"label", label_to_json(key.second)},
                      {"spd", gm_body(gm)}});
  j["track_densities"] = tracks;
  return j;
}

GlmbDensity glmb_from_json(const json& j) {
  check(j, "glmb");
  GlmbDensity out;
  out.indices = j.at("indices").get<std::vector<std::string>>();
  for (const auto& wj : j.at("weights"))
    out.weights[{wj.at("index").get<std::string>(), labelset_from_json(wj.at("labels"))}] =
        wj.at("weight").get<double>();
  for (const auto& tj : j.at("track_densities"))
    out.trackDensities[{tj.at("index").get<std::string>(),
                        label_from_json(tj.at("label"))}] = gm_from_body(tj.at("spd"));
  return out;
}

}  // namespace rfs
