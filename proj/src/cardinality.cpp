#include "rfs/cardinality.hpp"

#include <cmath>
#include <stdexcept>

namespace rfs {

CardinalityPmf::CardinalityPmf(std::vector<double> probs, bool normalize)
    : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("CardinalityPmf: empty support");
  double sum = 0.0;
  for (double p : probs_) {
    if (p < 0.0) throw std::invalid_argument("CardinalityPmf: negative probability");
    sum += p;
  }
  if (normalize) {
    if (sum <= 0.0) throw std::invalid_argument("CardinalityPmf: zero total mass");
    for (double& p : probs_) p /= sum;
  }
}

CardinalityPmf CardinalityPmf::poisson(double lambda, int nMax) {
  if (lambda < 0.0) throw std::invalid_argument("poisson: negative rate");
  std::vector<double> p(nMax + 1);
  double term = std::exp(-lambda);
  double covered = 0.0;
  for (int n = 0; n <= nMax; ++n) {
    p[n] = term;
    covered += term;
    term *= lambda / (n + 1);
  }
  CardinalityPmf pmf(std::move(p));
  pmf.set_truncation_warning(1.0 - covered > 1e-6);
  return pmf;
}

double CardinalityPmf::operator[](int n) const {
  if (n < 0) throw std::out_of_range("CardinalityPmf: negative n");
  return n <= n_max() ? probs_[n] : 0.0;
}

double CardinalityPmf::mean() const {
  double m = 0.0;
  for (int n = 0; n <= n_max(); ++n) m += n * probs_[n];
  return m;
}

double CardinalityPmf::total() const {
  double s = 0.0;
  for (double p : probs_) s += p;
  return s;
}

void CardinalityPmf::pad_to(int nMax) {
  if (n_max() < nMax) probs_.resize(nMax + 1, 0.0);
}

}  // namespace rfs
