#pragma once

#include <vector>

namespace rfs {

/// Probability mass function over the target count n = 0..N_max.
class CardinalityPmf {
public:
  static constexpr int kDefaultNMax = 32;

  CardinalityPmf() = default;
  explicit CardinalityPmf(std::vector<double> probs, bool normalize = true);

  /// Truncated Poisson pmf with the given rate. Sets the truncation
  /// warning flag when the truncated tail mass exceeds 1e-6.
  static CardinalityPmf poisson(double lambda, int nMax = kDefaultNMax);

  int n_max() const { return static_cast<int>(probs_.size()) - 1; }
  double operator[](int n) const;
  const std::vector<double>& probs() const { return probs_; }

  double mean() const;
  double total() const;

  /// Pads with zeros up to nMax (no-op if already at least that long).
  void pad_to(int nMax);

  bool truncation_warning() const { return truncationWarning_; }
  void set_truncation_warning(bool v) { truncationWarning_ = v; }

private:
  std::vector<double> probs_{1.0};  // degenerate at n = 0
  bool truncationWarning_ = false;
};

}  // namespace rfs
