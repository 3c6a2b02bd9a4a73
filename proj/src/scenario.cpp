#include "rfs/scenario.hpp"

#include "rfs/consensus.hpp"
#include "rfs/grid.hpp"
#include "rfs/moments.hpp"
#include "rfs/ospa.hpp"
#include "rfs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rfs {

using nlohmann::json;

FusionMode fusion_mode_from_string(const std::string& s) {
  if (s == "none") return FusionMode::None;
  if (s == "aa") return FusionMode::AA;
  if (s == "ga") return FusionMode::GA;
  if (s == "consensus") return FusionMode::Consensus;
  throw std::invalid_argument("unknown fusion mode: " + s);
}

WeightsMode weights_mode_from_string(const std::string& s) {
  if (s == "uniform") return WeightsMode::Uniform;
  if (s == "bfom") return WeightsMode::Bfom;
  throw std::invalid_argument("unknown weights mode: " + s);
}

MotionModel ScenarioConfig::motion_model() const {
  MotionModel m;
  m.F = Eigen::MatrixXd::Identity(4, 4);
  m.F(0, 2) = dt;
  m.F(1, 3) = dt;
  const double q2 = processNoiseStd * processNoiseStd;
  Eigen::MatrixXd G(4, 2);
  G << 0.5 * dt * dt, 0, 0, 0.5 * dt * dt, dt, 0, 0, dt;
  m.Q = q2 * G * G.transpose();
  m.survivalProb = survivalProb;
  return m;
}

BirthModel ScenarioConfig::birth_model() const {
  BirthModel b;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(4, 4);
  P.diagonal() << 25.0, 25.0, 9.0, 9.0;
  for (const auto& t : targets) b.births.emplace_back(birthWeight, t.initial, P);
  return b;
}

SensorModel default_sensor(double detectionProb, double clutterRate, double measNoiseStd,
                           const Eigen::Vector2d& regionLo, const Eigen::Vector2d& regionHi) {
  SensorModel s;
  s.H = Eigen::MatrixXd::Zero(2, 4);
  s.H(0, 0) = 1.0;
  s.H(1, 1) = 1.0;
  s.R = measNoiseStd * measNoiseStd * Eigen::MatrixXd::Identity(2, 2);
  s.detectionProb = detectionProb;
  s.clutterRate = clutterRate;
  s.clutterLo = regionLo;
  s.clutterHi = regionHi;
  return s;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig cfg;
  try {
    cfg.duration = j.at("duration").get<int>();
    if (cfg.duration < 1) throw std::invalid_argument("duration must be >= 1");
    cfg.dt = j.value("dt", 1.0);
    cfg.processNoiseStd = j.value("process_noise_std", 0.1);
    cfg.survivalProb = j.value("survival_prob", 0.99);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.birthWeight = j.value("birth_weight", 0.05);
    cfg.ospaCutoff = j.value("ospa_cutoff", 10.0);
    cfg.ospaOrder = j.value("ospa_order", 1.0);
    cfg.extractionThreshold = j.value("extraction_threshold", 0.5);
    cfg.consensusIterations = j.value("consensus_iterations", 0);
    cfg.fusion = fusion_mode_from_string(j.value("fusion", "aa"));
    cfg.weightsMode = weights_mode_from_string(j.value("weights", "uniform"));
    cfg.gateHalfWidth = j.value("gate_half_width", 3.0);

    const auto region = j.value("clutter_region", json{{"lo", {-100.0, -100.0}},
                                                       {"hi", {100.0, 100.0}}});
    Eigen::Vector2d lo(region.at("lo").at(0).get<double>(), region.at("lo").at(1).get<double>());
    Eigen::Vector2d hi(region.at("hi").at(0).get<double>(), region.at("hi").at(1).get<double>());
    cfg.gridLo = lo;
    cfg.gridHi = hi;
    cfg.gridRes = j.value("grid_resolution", 40);

    if (!j.contains("sensors") || j.at("sensors").empty())
      throw std::invalid_argument("at least one sensor required");
    for (const auto& sj : j.at("sensors")) {
      cfg.sensors.push_back(default_sensor(sj.value("detection_prob", 0.95),
                                           sj.value("clutter_rate", 0.0),
                                           sj.value("meas_noise_std", 1.0), lo, hi));
    }

    for (const auto& tj : j.value("targets", json::array())) {
      TargetScript t;
      t.birth = tj.at("birth").get<int>();
      t.death = tj.at("death").get<int>();
      if (t.death <= t.birth) throw std::invalid_argument("target death must follow birth");
      const auto init = tj.at("initial").get<std::vector<double>>();
      if (init.size() != 4) throw std::invalid_argument("target initial state must have 4 entries");
      t.initial = Eigen::Map<const Eigen::VectorXd>(init.data(), 4);
      cfg.targets.push_back(std::move(t));
    }

    for (const auto& ej : j.value("graph", json::array()))
      cfg.graphEdges.emplace_back(ej.at(0).get<int>(), ej.at(1).get<int>());

    if (j.contains("blind")) {
      const auto& bj = j.at("blind");
      cfg.blind = BlindWindow{bj.at("sensor").get<int>(), bj.at("target").get<int>(),
                              bj.at("from").get<int>(), bj.at("length").get<int>()};
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario config: ") + e.what());
  }
  return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
  json j;
  j["duration"] = cfg.duration;
  j["dt"] = cfg.dt;
  j["process_noise_std"] = cfg.processNoiseStd;
  j["survival_prob"] = cfg.survivalProb;
  j["seed"] = cfg.seed;
  j["birth_weight"] = cfg.birthWeight;
  j["ospa_cutoff"] = cfg.ospaCutoff;
  j["ospa_order"] = cfg.ospaOrder;
  j["consensus_iterations"] = cfg.consensusIterations;
  j["grid_resolution"] = cfg.gridRes;
  j["clutter_region"] = {{"lo", {cfg.gridLo(0), cfg.gridLo(1)}},
                         {"hi", {cfg.gridHi(0), cfg.gridHi(1)}}};
  json sensors = json::array();
  for (const auto& s : cfg.sensors)
    sensors.push_back({{"detection_prob", s.detectionProb},
                       {"clutter_rate", s.clutterRate},
                       {"meas_noise_std", std::sqrt(s.R(0, 0))}});
  j["sensors"] = sensors;
  json targets = json::array();
  for (const auto& t : cfg.targets)
    targets.push_back({{"birth", t.birth},
                       {"death", t.death},
                       {"initial", {t.initial(0), t.initial(1), t.initial(2), t.initial(3)}}});
  j["targets"] = targets;
  return j;
}

std::vector<std::vector<TruthPoint>> generate_truth(const ScenarioConfig& cfg) {
  const MotionModel motion = cfg.motion_model();
  std::vector<std::vector<TruthPoint>> out(cfg.duration);
  for (std::size_t t = 0; t < cfg.targets.size(); ++t) {
    auto rng = make_stream(cfg.seed, 1000 + t);
    std::normal_distribution<double> accel(0.0, cfg.processNoiseStd);
    Eigen::VectorXd x = cfg.targets[t].initial;
    Eigen::MatrixXd G(4, 2);
    G << 0.5 * cfg.dt * cfg.dt, 0, 0, 0.5 * cfg.dt * cfg.dt, cfg.dt, 0, 0, cfg.dt;
    for (int k = 0; k < cfg.duration; ++k) {
      if (k >= cfg.targets[t].birth && k < cfg.targets[t].death)
        out[k].push_back({x, static_cast<int>(t)});
      Eigen::Vector2d a(accel(rng), accel(rng));
      x = motion.F * x + G * a;
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> generate_measurements(const std::vector<TruthPoint>& truth,
                                                   const SensorModel& sensor,
                                                   std::mt19937_64& rng) {
  std::vector<Eigen::VectorXd> out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> stdn(0.0, 1.0);
  const Eigen::MatrixXd Rchol = Eigen::LLT<Eigen::MatrixXd>(sensor.R).matrixL();
  const int m = static_cast<int>(sensor.H.rows());

  for (const auto& tp : truth) {
    if (unit(rng) > sensor.detectionProb) continue;
    Eigen::VectorXd noise(m);
    for (int i = 0; i < m; ++i) noise(i) = stdn(rng);
    out.push_back(sensor.H * tp.state + Rchol * noise);
  }
  if (sensor.clutterRate > 0.0) {
    std::poisson_distribution<int> clutterCount(sensor.clutterRate);
    const int n = clutterCount(rng);
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd z(m);
      for (int k = 0; k < m; ++k)
        z(k) = sensor.clutterLo(k) + unit(rng) * (sensor.clutterHi(k) - sensor.clutterLo(k));
      out.push_back(std::move(z));
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

namespace {

/// Position marginal (first two state dimensions) of a 4-D mixture.
GaussianMixture position_marginal(const GaussianMixture& gm) {
  GaussianMixture out(2);
  for (const auto& c : gm.components())
    out.add(GaussianComponent(c.weight, c.mean.head(2), c.cov.topLeftCorner(2, 2)));
  return out;
}

GridDensity make_eval_grid(const ScenarioConfig& cfg) {
  GridDensity g;
  const double dx = (cfg.gridHi(0) - cfg.gridLo(0)) / cfg.gridRes;
  const double dy = (cfg.gridHi(1) - cfg.gridLo(1)) / cfg.gridRes;
  g.cellVolume = dx * dy;
  for (int i = 0; i < cfg.gridRes; ++i)
    for (int j = 0; j < cfg.gridRes; ++j) {
      Eigen::VectorXd p(2);
      p << cfg.gridLo(0) + (i + 0.5) * dx, cfg.gridLo(1) + (j + 0.5) * dy;
      g.points.push_back(std::move(p));
      g.values.push_back(0.0);
    }
  return g;
}

double grid_mass_in_box(const GridDensity& g, const Eigen::Vector2d& lo,
                        const Eigen::Vector2d& hi) {
  double mass = 0.0;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const auto& p = g.points[i];
    if (p(0) >= lo(0) && p(0) <= hi(0) && p(1) >= lo(1) && p(1) <= hi(1))
      mass += g.values[i];
  }
  return mass * g.cellVolume;
}

std::vector<Eigen::VectorXd> positions_of(const std::vector<TruthPoint>& truth) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& tp : truth) out.push_back(tp.state.head(2));
  return out;
}

std::vector<Eigen::VectorXd> positions_of(const std::vector<ExtractedState>& est) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& e : est) out.push_back(e.state.head(2));
  return out;
}

StepRecord make_record(int step, int node, const std::vector<Eigen::VectorXd>& est,
                       const std::vector<TruthPoint>& truth, double cardEstimate,
                       const ScenarioConfig& cfg) {
  StepRecord r;
  r.step = step;
  r.node = node;
  r.ospa = ospa(est, positions_of(truth), cfg.ospaCutoff, cfg.ospaOrder);
  r.cardinalityEstimate = cardEstimate;
  r.cardinalityTruth = static_cast<int>(truth.size());
  const double e = cardEstimate - r.cardinalityTruth;
  r.cardinalitySqError = e * e;
  return r;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  if (cfg.sensors.empty()) throw std::invalid_argument("run_scenario: no sensors");
  const int I = static_cast<int>(cfg.sensors.size());
  const MotionModel motion = cfg.motion_model();
  const BirthModel birth = cfg.birth_model();
  const FilterReduction reduction;

  const auto truth = generate_truth(cfg);
  std::vector<std::mt19937_64> streams;
  for (int i = 0; i < I; ++i) streams.push_back(make_stream(cfg.seed, i));

  std::vector<GaussianMixture> posteriors(I, GaussianMixture(4));
  RunResult result;

  const GridDensity evalGrid =
      (cfg.fusion == FusionMode::GA || cfg.weightsMode == WeightsMode::Bfom || cfg.blind)
          ? make_eval_grid(cfg)
          : GridDensity{};

  Eigen::MatrixXd W;
  if (cfg.fusion == FusionMode::Consensus) {
    SensorGraph graph = cfg.graphEdges.empty() ? SensorGraph::ring(I)
                                               : SensorGraph(I, cfg.graphEdges);
    W = metropolis_weights(graph);
  }

  std::vector<double> sumOspa(I, 0.0), sumCardErr(I, 0.0);
  double sumOspaFused = 0.0, sumCardErrFused = 0.0;

  for (int k = 0; k < cfg.duration; ++k) {
    // Local predict/update per sensor.
    for (int i = 0; i < I; ++i) {
      std::vector<TruthPoint> visible;
      for (const auto& tp : truth[k])
        if (!cfg.blind || !cfg.blind->active(i, tp.targetId, k)) visible.push_back(tp);
      const auto meas = generate_measurements(visible, cfg.sensors[i], streams[i]);
      GaussianMixture predicted = phd_predict(posteriors[i], motion, birth);
      posteriors[i] = reduce_posterior(phd_update(predicted, meas, cfg.sensors[i]), reduction);
    }

    // Local metrics.
    for (int i = 0; i < I; ++i) {
      const auto est = positions_of(extract_states(posteriors[i]));
      StepRecord r = make_record(k, i, est, truth[k], posteriors[i].mass(), cfg);
      sumOspa[i] += r.ospa;
      sumCardErr[i] += r.cardinalitySqError;
      result.records.push_back(r);
    }

    // Fusion.
    FusionWeights w = FusionWeights::uniform(I);
    if (cfg.weightsMode == WeightsMode::Bfom && I >= 2) {
      std::vector<GridDensity> grids;
      bool usable = true;
      for (int i = 0; i < I; ++i) {
        GridDensity g = GridDensity::from_mixture(position_marginal(posteriors[i]), evalGrid);
        if (g.mass() <= 0.0) usable = false;
        g.normalize();
        grids.push_back(std::move(g));
      }
      if (usable) w = bfom_weights(grids);
    }

    GaussianMixture fusedPhd;
    std::vector<Eigen::VectorXd> fusedEst;
    double fusedCard = 0.0;

    switch (cfg.fusion) {
      case FusionMode::None: {
        fusedPhd = posteriors[0];
        fusedEst = positions_of(extract_states(fusedPhd));
        fusedCard = fusedPhd.mass();
        break;
      }
      case FusionMode::AA: {
        // Reduce so duplicate per-sensor components of one target merge
        // before the count-ranked extraction.
        fusedPhd = reduce_posterior(aa_gm(posteriors, w), reduction);
        fusedEst = positions_of(extract_states(fusedPhd));
        fusedCard = fusedPhd.mass();
        break;
      }
      case FusionMode::GA: {
        std::vector<GridDensity> grids;
        for (int i = 0; i < I; ++i)
          grids.push_back(GridDensity::from_mixture(position_marginal(posteriors[i]), evalGrid));
        // Unnormalized geometric pool for the count estimate.
        GridDensity pooled = evalGrid;
        for (std::size_t c = 0; c < pooled.values.size(); ++c) {
          double logv = 0.0;
          bool zero = false;
          for (int i = 0; i < I; ++i) {
            if (grids[i].values[c] <= 0.0) {
              zero = true;
              break;
            }
            logv += w[i] * std::log(grids[i].values[c]);
          }
          pooled.values[c] = zero ? 0.0 : std::exp(logv);
        }
        fusedCard = pooled.mass();
        const int n = std::max(0, static_cast<int>(std::lround(fusedCard)));
        // Peak picking with a one-cell-radius suppression.
        std::vector<std::size_t> order(pooled.values.size());
        for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
        std::sort(order.begin(), order.end(), [&pooled](std::size_t a, std::size_t b) {
          return pooled.values[a] > pooled.values[b];
        });
        const double minSep = 2.0 * std::sqrt(pooled.cellVolume);
        for (std::size_t c : order) {
          if (static_cast<int>(fusedEst.size()) >= n) break;
          bool tooClose = false;
          for (const auto& e : fusedEst)
            if ((e - pooled.points[c]).norm() < minSep) tooClose = true;
          if (!tooClose) fusedEst.push_back(pooled.points[c]);
        }
        break;
      }
      case FusionMode::Consensus: {
        ConsensusState state;
        state.perNode = posteriors;
        ReductionParams rp{reduction.pruneThreshold, reduction.mergeThreshold,
                           reduction.maxComponents};
        const auto run = run_consensus(state, W, cfg.consensusIterations, rp);
        posteriors = run.finalState.perNode;  // feedback to the local filters
        fusedPhd = posteriors[0];
        fusedEst = positions_of(extract_states(fusedPhd));
        fusedCard = fusedPhd.mass();
        break;
      }
    }

    StepRecord fr = make_record(k, -1, fusedEst, truth[k], fusedCard, cfg);
    sumOspaFused += fr.ospa;
    sumCardErrFused += fr.cardinalitySqError;
    result.records.push_back(fr);

    // Misdetection robustness series at blind steps.
    if (cfg.blind && k >= cfg.blind->from && k < cfg.blind->from + cfg.blind->length) {
      const auto& bw = *cfg.blind;
      const TruthPoint* target = nullptr;
      for (const auto& tp : truth[k])
        if (tp.targetId == bw.target) target = &tp;
      if (target) {
        const Eigen::Vector2d pos = target->state.head(2);
        const Eigen::Vector2d lo = (pos.array() - cfg.gateHalfWidth).matrix();
        const Eigen::Vector2d hi = (pos.array() + cfg.gateHalfWidth).matrix();

        const GaussianMixture aaFused = aa_gm(posteriors, FusionWeights::uniform(I));
        result.summary.aaGateMass.push_back(position_marginal(aaFused).mass_in_box(lo, hi));

        double detecting = 0.0;
        int count = 0;
        for (int i = 0; i < I; ++i) {
          if (i == bw.sensor) continue;
          detecting += position_marginal(posteriors[i]).mass_in_box(lo, hi);
          ++count;
        }
        result.summary.meanDetectingGateMass.push_back(detecting / count);

        std::vector<GridDensity> grids;
        for (int i = 0; i < I; ++i)
          grids.push_back(GridDensity::from_mixture(position_marginal(posteriors[i]), evalGrid));
        const GridDensity ga = ga_fuse_grid(grids, FusionWeights::uniform(I));
        result.summary.gaGateMass.push_back(grid_mass_in_box(ga, lo, hi));
      }
    }
  }

  for (int i = 0; i < I; ++i) {
    result.summary.meanOspaPerSensor.push_back(sumOspa[i] / cfg.duration);
    result.summary.meanCardSqErrPerSensor.push_back(sumCardErr[i] / cfg.duration);
  }
  result.summary.meanOspaFused = sumOspaFused / cfg.duration;
  result.summary.meanCardSqErrFused = sumCardErrFused / cfg.duration;
  return result;
}

std::vector<RunResult> run_monte_carlo(const ScenarioConfig& cfg, int runs, bool parallel) {
  std::vector<RunResult> out(runs);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int r = 0; r < runs; ++r) {
    ScenarioConfig c = cfg;
    std::uint64_t s = cfg.seed + 0x9e3779b97f4a7c15ULL * (r + 1);
    c.seed = splitmix64(s);
    out[r] = run_scenario(c);
  }
  return out;
}

void write_jsonl(const std::vector<RunResult>& runs, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const auto& rec : runs[r].records) {
      json j{{"schema", kRunSchema},
             {"run", r},
             {"step", rec.step},
             {"node", rec.node},
             {"ospa", rec.ospa},
             {"cardinality_estimate", rec.cardinalityEstimate},
             {"cardinality_truth", rec.cardinalityTruth},
             {"cardinality_sq_error", rec.cardinalitySqError}};
      os << j.dump() << '\n';
    }
  }
}

void write_summary_csv(const std::vector<RunResult>& runs, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "schema,run,node,mean_ospa,mean_cardinality_sq_error\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& s = runs[r].summary;
    for (std::size_t i = 0; i < s.meanOspaPerSensor.size(); ++i)
      os << kRunSchema << ',' << r << ',' << i << ',' << s.meanOspaPerSensor[i] << ','
         << s.meanCardSqErrPerSensor[i] << '\n';
    os << kRunSchema << ',' << r << ',' << -1 << ',' << s.meanOspaFused << ','
       << s.meanCardSqErrFused << '\n';
  }
}

std::vector<MseRow> mse_consistency_experiment(const std::vector<int>& sensorCounts, int trials,
                                               double sigma, std::uint64_t seed) {
  std::vector<MseRow> rows;
  const double trueCount = 5.0;
  for (std::size_t k = 0; k < sensorCounts.size(); ++k) {
    const int I = sensorCounts[k];
    auto rng = make_stream(seed, 7000 + k);
    std::normal_distribution<double> noise(0.0, sigma);
    double sumSq = 0.0;
    for (int t = 0; t < trials; ++t) {
      double mean = 0.0;
      for (int i = 0; i < I; ++i) mean += trueCount + noise(rng);
      mean /= I;
      const double e = mean - trueCount;
      sumSq += e * e;
    }
    rows.push_back({I, sigma * sigma / I, sumSq / trials});
  }
  return rows;
}

}  // namespace rfs
