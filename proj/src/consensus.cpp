#include "rfs/consensus.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rfs {

SensorGraph::SensorGraph(int nodeCount, std::vector<std::pair<int, int>> edges)
    : nodeCount_(nodeCount), edges_(std::move(edges)), adjacency_(nodeCount) {
  if (nodeCount_ < 1) throw std::invalid_argument("SensorGraph: need at least one node");
  for (auto& [a, b] : edges_) {
    if (a == b) throw std::invalid_argument("SensorGraph: self-loop");
    if (a < 0 || b < 0 || a >= nodeCount_ || b >= nodeCount_)
      throw std::invalid_argument("SensorGraph: edge endpoint out of range");
    if (a > b) std::swap(a, b);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
}

bool SensorGraph::connected() const {
  std::vector<bool> seen(nodeCount_, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adjacency_[u])
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
  }
  return count == nodeCount_;
}

SensorGraph SensorGraph::ring(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return SensorGraph(n, std::move(e));
}

SensorGraph SensorGraph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return SensorGraph(n, std::move(e));
}

SensorGraph SensorGraph::path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return SensorGraph(n, std::move(e));
}

SensorGraph SensorGraph::star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return SensorGraph(leaves + 1, std::move(e));
}

Eigen::MatrixXd metropolis_weights(const SensorGraph& g) {
  if (!g.connected()) throw std::invalid_argument("metropolis_weights: graph not connected");
  const int n = g.node_count();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [a, b] : g.edges()) {
    const double w = 1.0 / (1.0 + std::max(g.degree(a), g.degree(b)));
    W(a, b) = w;
    W(b, a) = w;
  }
  for (int i = 0; i < n; ++i) W(i, i) = 1.0 - W.row(i).sum();
  return W;
}

namespace {

GaussianMixture node_update(const ConsensusState& state, const Eigen::MatrixXd& W, int i,
                            const ReductionParams& reduction) {
  GaussianMixture mixed;
  for (std::size_t j = 0; j < state.perNode.size(); ++j)
    if (W(i, static_cast<int>(j)) > 0.0)
      mixed.add_scaled(state.perNode[j], W(i, static_cast<int>(j)));
  return gm_reduce(mixed, reduction.pruneThreshold, reduction.mergeThreshold,
                   reduction.maxComponents);
}

}  // namespace

ConsensusState consensus_step(const ConsensusState& state, const Eigen::MatrixXd& W,
                              const ReductionParams& reduction) {
  const int n = static_cast<int>(state.perNode.size());
  ConsensusState next;
  next.perNode.resize(n);
  next.iteration = state.iteration + 1;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) next.perNode[i] = node_update(state, W, i, reduction);
  return next;
}

ConsensusState consensus_step_serial(const ConsensusState& state, const Eigen::MatrixXd& W,
                                     const ReductionParams& reduction) {
  const int n = static_cast<int>(state.perNode.size());
  ConsensusState next;
  next.perNode.resize(n);
  next.iteration = state.iteration + 1;
  for (int i = 0; i < n; ++i) next.perNode[i] = node_update(state, W, i, reduction);
  return next;
}

ConsensusRunResult run_consensus(const ConsensusState& initial, const Eigen::MatrixXd& W,
                                 int iterations, const ReductionParams& reduction,
                                 bool parallel) {
  if (iterations < 0) throw std::invalid_argument("run_consensus: negative iteration count");
  ConsensusRunResult result;
  result.finalState = initial;
  auto record = [&result]() {
    std::vector<double> masses;
    for (const auto& gm : result.finalState.perNode) masses.push_back(gm.mass());
    result.massHistory.push_back(std::move(masses));
  };
  record();
  for (int it = 0; it < iterations; ++it) {
    result.finalState = parallel ? consensus_step(result.finalState, W, reduction)
                                 : consensus_step_serial(result.finalState, W, reduction);
    record();
  }
  return result;
}

}  // namespace rfs
