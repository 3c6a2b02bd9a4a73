#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rfs {

/// Minimum-cost assignment on a square cost matrix (Hungarian method,
/// O(n^3)). Returns the column assigned to each row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Optimal subpattern assignment distance between two finite state sets
/// with cutoff c and order p.
double ospa(const std::vector<Eigen::VectorXd>& X, const std::vector<Eigen::VectorXd>& Y,
            double cutoff, double order);

}  // namespace rfs
