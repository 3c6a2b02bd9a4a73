#include "rfs/ospa.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfs {

// Jonker-Volgenant style shortest augmenting path assignment.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("solve_assignment: matrix not square");
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> rowToCol(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) rowToCol[p[j] - 1] = j - 1;
  return rowToCol;
}

double ospa(const std::vector<Eigen::VectorXd>& X, const std::vector<Eigen::VectorXd>& Y,
            double cutoff, double order) {
  if (cutoff <= 0.0 || order < 1.0) throw std::invalid_argument("ospa: invalid parameters");
  const int m = static_cast<int>(X.size());
  const int k = static_cast<int>(Y.size());
  if (m == 0 && k == 0) return 0.0;
  if (m == 0 || k == 0) return cutoff;

  const auto& small = m <= k ? X : Y;
  const auto& large = m <= k ? Y : X;
  const int n = static_cast<int>(large.size());

  // Pad the short side with dummies at cost c^p.
  Eigen::MatrixXd cost(n, n);
  const double cp = std::pow(cutoff, order);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i < static_cast<int>(small.size())) {
        const double d = std::min(cutoff, (small[i] - large[j]).norm());
        cost(i, j) = std::pow(d, order);
      } else {
        cost(i, j) = cp;
      }
    }

  const std::vector<int> assign = solve_assignment(cost);
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost(i, assign[i]);
  return std::pow(total / n, 1.0 / order);
}

}  // namespace rfs
