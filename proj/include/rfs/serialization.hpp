#pragma once

#include "rfs/densities.hpp"
#include "rfs/labeled.hpp"

#include <json.hpp>

namespace rfs {

// JSON schema "rfs-density/1": every document carries {"schema", "family"},
// Gaussian parameters are stored row-major with a declared dimension.

inline constexpr const char* kDensitySchema = "rfs-density/1";

nlohmann::json to_json(const GaussianMixture& gm);
nlohmann::json to_json(const PoissonDensity& d);
nlohmann::json to_json(const IidcDensity& d);
nlohmann::json to_json(const BernoulliComponent& d);
nlohmann::json to_json(const MultiBernoulli& d);
nlohmann::json to_json(const MbMixture& d);
nlohmann::json to_json(const LmbDensity& d);
nlohmann::json to_json(const DeltaGlmbDensity& d);
nlohmann::json to_json(const MglmbDensity& d);
nlohmann::json to_json(const GlmbDensity& d);

GaussianMixture gm_from_json(const nlohmann::json& j);
PoissonDensity poisson_from_json(const nlohmann::json& j);
IidcDensity iidc_from_json(const nlohmann::json& j);
BernoulliComponent bernoulli_from_json(const nlohmann::json& j);
MultiBernoulli mb_from_json(const nlohmann::json& j);
MbMixture mbm_from_json(const nlohmann::json& j);
LmbDensity lmb_from_json(const nlohmann::json& j);
DeltaGlmbDensity delta_glmb_from_json(const nlohmann::json& j);
MglmbDensity mglmb_from_json(const nlohmann::json& j);
GlmbDensity glmb_from_json(const nlohmann::json& j);

}  // namespace rfs
