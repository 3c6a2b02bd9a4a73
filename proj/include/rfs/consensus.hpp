#pragma once

#include "rfs/gaussian.hpp"

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace rfs {

/// Undirected sensor communication graph.
class SensorGraph {
public:
  SensorGraph(int nodeCount, std::vector<std::pair<int, int>> edges);

  int node_count() const { return nodeCount_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  int degree(int node) const { return static_cast<int>(adjacency_[node].size()); }
  const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }
  bool connected() const;

  static SensorGraph ring(int n);
  static SensorGraph complete(int n);
  static SensorGraph path(int n);
  static SensorGraph star(int leaves);

private:
  int nodeCount_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Metropolis weight matrix: W(i,j) = 1/(1 + max(deg_i, deg_j)) on edges,
/// diagonal completes each row to 1. Symmetric and doubly stochastic.
Eigen::MatrixXd metropolis_weights(const SensorGraph& g);

/// Per-node mixture state of an iterative consensus run.
struct ConsensusState {
  std::vector<GaussianMixture> perNode;
  int iteration = 0;
};

struct ReductionParams {
  double pruneThreshold = 1e-5;
  double mergeThreshold = 4.0;
  int maxComponents = 100;
};

/// One synchronous consensus round: node i's next mixture is the row-
/// weighted average of its neighborhood, then reduced. Nodes update in
/// parallel; result is independent of execution order.
ConsensusState consensus_step(const ConsensusState& state, const Eigen::MatrixXd& W,
                              const ReductionParams& reduction);

/// Serial reference for consensus_step; identical output.
ConsensusState consensus_step_serial(const ConsensusState& state, const Eigen::MatrixXd& W,
                                     const ReductionParams& reduction);

struct ConsensusRunResult {
  ConsensusState finalState;
  std::vector<std::vector<double>> massHistory;  // per iteration, per node
};

ConsensusRunResult run_consensus(const ConsensusState& initial, const Eigen::MatrixXd& W,
                                 int iterations, const ReductionParams& reduction,
                                 bool parallel = true);

}  // namespace rfs
