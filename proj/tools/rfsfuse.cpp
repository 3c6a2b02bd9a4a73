// Command line front end: scenario runs, the estimator-fusion MSE
// experiment, and the brute-force moment oracle checks.

#include "rfs/fusion.hpp"
#include "rfs/moments.hpp"
#include "rfs/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitCheckFailure = 3;

int cmd_run(const std::string& scenarioPath, const std::string& outDir,
            const std::optional<std::uint64_t>& seed, const std::string& fusion,
            const std::string& weights, int consensusIters, int mcRuns) {
  std::ifstream is(scenarioPath);
  if (!is) {
    std::cerr << "cannot open scenario file: " << scenarioPath << "\n";
    return kExitConfigError;
  }
  rfs::ScenarioConfig cfg;
  try {
    cfg = rfs::scenario_from_json(nlohmann::json::parse(is));
    if (seed) cfg.seed = *seed;
    if (!fusion.empty()) cfg.fusion = rfs::fusion_mode_from_string(fusion);
    if (!weights.empty()) cfg.weightsMode = rfs::weights_mode_from_string(weights);
    if (consensusIters >= 0) cfg.consensusIterations = consensusIters;
    if (mcRuns < 1) throw std::invalid_argument("--mc-runs must be >= 1");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const auto results = rfs::run_monte_carlo(cfg, mcRuns);
  std::filesystem::create_directories(outDir);
  rfs::write_jsonl(results, outDir + "/steps.jsonl");
  rfs::write_summary_csv(results, outDir + "/summary.csv");

  double localOspa = 0.0, fusedOspa = 0.0;
  for (const auto& r : results) {
    double l = 0.0;
    for (double v : r.summary.meanOspaPerSensor) l += v;
    localOspa += l / r.summary.meanOspaPerSensor.size();
    fusedOspa += r.summary.meanOspaFused;
  }
  std::cout << "runs: " << results.size() << "\n"
            << "mean local OSPA:  " << localOspa / results.size() << "\n"
            << "mean fused OSPA:  " << fusedOspa / results.size() << "\n"
            << "wrote " << outDir << "/steps.jsonl and " << outDir << "/summary.csv\n";
  return 0;
}

int cmd_mse(const std::vector<int>& sensors, int trials, const std::string& outPath) {
  if (sensors.empty() || trials < 1) {
    std::cerr << "config error: need at least one sensor count and trials >= 1\n";
    return kExitConfigError;
  }
  const auto rows = rfs::mse_consistency_experiment(sensors, trials);
  std::ofstream os(outPath);
  if (!os) {
    std::cerr << "cannot open output file: " << outPath << "\n";
    return kExitConfigError;
  }
  os << "sensors,analytic_mse,empirical_mse\n";
  bool ok = true;
  for (const auto& r : rows) {
    os << r.sensors << ',' << r.analyticMse << ',' << r.empiricalMse << '\n';
    const double rel = std::abs(r.empiricalMse - r.analyticMse) / r.analyticMse;
    const bool pass = rel < 0.15;
    ok = ok && pass;
    std::cout << "I=" << r.sensors << "  analytic=" << r.analyticMse
              << "  empirical=" << r.empiricalMse << "  " << (pass ? "ok" : "MISMATCH") << "\n";
  }
  return ok ? 0 : kExitCheckFailure;
}

rfs::GaussianMixture spd1(double mean, double var) {
  Eigen::VectorXd m(1);
  m << mean;
  Eigen::MatrixXd P(1, 1);
  P << var;
  rfs::GaussianMixture gm(1);
  gm.add(rfs::GaussianComponent(1.0, m, P));
  return gm;
}

template <typename Density>
bool oracle_check(const std::string& name, const Density& d, const rfs::GridDensity& grid,
                  double tol) {
  const rfs::GridDensity oracle = rfs::brute_force_phd(d, grid, 4);
  const rfs::GridDensity analytic = rfs::GridDensity::from_mixture(rfs::phd_of(d), grid);
  double maxDiff = 0.0;
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    maxDiff = std::max(maxDiff, std::abs(oracle.values[i] - analytic.values[i]));
  const bool pass = maxDiff < tol;
  std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  max cell error " << maxDiff
            << " (tolerance " << tol << ")\n";
  return pass;
}

int cmd_oracle_suite() {
  const rfs::GridDensity grid = rfs::GridDensity::uniform_1d(0.0, 12.0, 12);
  bool ok = true;

  rfs::PoissonDensity poisson{0.1, spd1(6.0, 1.0)};
  ok &= oracle_check("poisson intensity vs set-integral oracle", poisson, grid, 1e-6);

  rfs::IidcDensity iidc;
  iidc.cardinality = rfs::CardinalityPmf({0.55, 0.25, 0.15, 0.05});
  iidc.spd = spd1(6.0, 1.0);
  ok &= oracle_check("iid-cluster intensity vs set-integral oracle", iidc, grid, 1e-6);

  rfs::BernoulliComponent bern{0.4, spd1(5.5, 1.0)};
  ok &= oracle_check("bernoulli intensity vs set-integral oracle", bern, grid, 1e-6);

  rfs::MultiBernoulli mb;
  mb.components.push_back({0.3, spd1(4.5, 1.0)});
  mb.components.push_back({0.5, spd1(7.5, 1.0)});
  ok &= oracle_check("multi-bernoulli intensity vs set-integral oracle", mb, grid, 1e-6);

  rfs::MbMixture mbm;
  rfs::MultiBernoulli mb2;
  mb2.components.push_back({0.6, spd1(6.0, 1.0)});
  mbm.hypotheses.push_back({0.6, mb});
  mbm.hypotheses.push_back({0.4, mb2});
  ok &= oracle_check("multi-bernoulli mixture intensity vs set-integral oracle", mbm, grid, 1e-6);

  return ok ? 0 : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-sensor multi-target density fusion toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Simulate a scenario and write per-step results");
  std::string scenarioPath, outDir;
  std::uint64_t seedValue = 0;
  std::string fusion, weights;
  int consensusIters = -1, mcRuns = 1;
  run->add_option("--scenario", scenarioPath, "Scenario JSON file")->required();
  run->add_option("--out", outDir, "Output directory")->required();
  auto* seedOpt = run->add_option("--seed", seedValue, "Master seed override");
  run->add_option("--fusion", fusion, "Fusion rule")
      ->check(CLI::IsMember({"none", "aa", "ga", "consensus"}));
  run->add_option("--weights", weights, "Fusion weights")
      ->check(CLI::IsMember({"uniform", "bfom"}));
  run->add_option("--consensus-iters", consensusIters, "Consensus iterations per step");
  run->add_option("--mc-runs", mcRuns, "Monte-Carlo repetitions");

  auto* mse = app.add_subcommand("mse-experiment",
                                 "Averaged-estimator error scaling vs sensor count");
  std::vector<int> sensorCounts;
  int trials = 10000;
  std::string msePath = "mse.csv";
  mse->add_option("--sensors", sensorCounts, "Sensor counts to evaluate")
      ->required()
      ->delimiter(',');
  mse->add_option("--trials", trials, "Trials per sensor count");
  mse->add_option("--out", msePath, "Output CSV file");

  app.add_subcommand("oracle-suite",
                     "Check analytic intensities against the set-integral oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (app.got_subcommand("run")) {
      std::optional<std::uint64_t> seed;
      if (seedOpt->count() > 0) seed = seedValue;
      return cmd_run(scenarioPath, outDir, seed, fusion, weights, consensusIters, mcRuns);
    }
    if (app.got_subcommand("mse-experiment")) return cmd_mse(sensorCounts, trials, msePath);
    return cmd_oracle_suite();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
