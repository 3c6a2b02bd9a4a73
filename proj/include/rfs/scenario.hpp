#pragma once

#include "rfs/filters.hpp"
#include "rfs/fusion.hpp"
#include "rfs/gaussian.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace rfs {

inline constexpr const char* kRunSchema = "rfs-run/1";

enum class FusionMode { None, AA, GA, Consensus };
enum class WeightsMode { Uniform, Bfom };

FusionMode fusion_mode_from_string(const std::string& s);
WeightsMode weights_mode_from_string(const std::string& s);

/// Scripted target: born at `birth`, removed at `death` (exclusive).
struct TargetScript {
  int birth = 0;
  int death = 0;
  Eigen::VectorXd initial;  // full state
};

/// One sensor blinded to one target over a step window (robustness runs).
struct BlindWindow {
  int sensor = 0;
  int target = 0;
  int from = 0;
  int length = 0;

  bool active(int sensor_, int target_, int step) const {
    return sensor_ == sensor && target_ == target && step >= from && step < from + length;
  }
};

/// Full scenario description. The motion model is a 2-D constant-velocity
/// model (state [x, y, vx, vy]); sensors observe positions.
struct ScenarioConfig {
  int duration = 50;
  double dt = 1.0;
  double processNoiseStd = 0.1;
  double survivalProb = 0.99;

  std::vector<SensorModel> sensors;
  std::vector<TargetScript> targets;
  std::vector<std::pair<int, int>> graphEdges;

  FusionMode fusion = FusionMode::AA;
  WeightsMode weightsMode = WeightsMode::Uniform;
  int consensusIterations = 0;
  std::uint64_t seed = 0;

  double birthWeight = 0.05;
  double ospaCutoff = 10.0;
  double ospaOrder = 1.0;
  double extractionThreshold = 0.5;

  // Evaluation grid (positions) for GA fusion and BFoM weights.
  Eigen::Vector2d gridLo{-100.0, -100.0};
  Eigen::Vector2d gridHi{100.0, 100.0};
  int gridRes = 40;

  // Gate half-width for the misdetection robustness metric.
  double gateHalfWidth = 3.0;

  std::optional<BlindWindow> blind;

  MotionModel motion_model() const;
  BirthModel birth_model() const;
};

ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// Default 2-D position sensor used when a scenario config omits fields.
SensorModel default_sensor(double detectionProb, double clutterRate, double measNoiseStd,
                           const Eigen::Vector2d& regionLo, const Eigen::Vector2d& regionHi);

// ---- Simulation primitives ----

struct TruthPoint {
  Eigen::VectorXd state;
  int targetId = 0;
};

/// Deterministic given cfg.seed: scripted births/deaths with linear-
/// Gaussian propagation.
std::vector<std::vector<TruthPoint>> generate_truth(const ScenarioConfig& cfg);

std::vector<Eigen::VectorXd> generate_measurements(const std::vector<TruthPoint>& truth,
                                                   const SensorModel& sensor,
                                                   std::mt19937_64& rng);

// ---- Per-run outputs ----

struct StepRecord {
  int step = 0;
  int node = -1;  // sensor index, or -1 for the fused output
  double ospa = 0.0;
  double cardinalityEstimate = 0.0;
  int cardinalityTruth = 0;
  double cardinalitySqError = 0.0;
};

struct RunSummary {
  std::vector<double> meanOspaPerSensor;
  std::vector<double> meanCardSqErrPerSensor;
  double meanOspaFused = 0.0;
  double meanCardSqErrFused = 0.0;
  // Misdetection robustness series, filled when cfg.blind is set:
  // one entry per blind step.
  std::vector<double> aaGateMass;
  std::vector<double> gaGateMass;
  std::vector<double> meanDetectingGateMass;
};

struct RunResult {
  std::vector<StepRecord> records;
  RunSummary summary;
};

RunResult run_scenario(const ScenarioConfig& cfg);

/// Monte-Carlo wrapper: runs with seeds derived from cfg.seed + run index.
/// Runs execute in parallel unless `parallel` is false.
std::vector<RunResult> run_monte_carlo(const ScenarioConfig& cfg, int runs, bool parallel = true);

void write_jsonl(const std::vector<RunResult>& runs, const std::string& path);
void write_summary_csv(const std::vector<RunResult>& runs, const std::string& path);

// ---- Synthetic cardinality-estimator fusion experiment ----

struct MseRow {
  int sensors = 0;
  double analyticMse = 0.0;   // sigma^2 / I for uniform weights
  double empiricalMse = 0.0;
};

std::vector<MseRow> mse_consistency_experiment(const std::vector<int>& sensorCounts, int trials,
                                               double sigma = 1.0, std::uint64_t seed = 0);

}  // namespace rfs
