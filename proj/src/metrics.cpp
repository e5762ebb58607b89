#include "pwcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pwcs {

double mse(const Matrix& x, const Matrix& x_hat) {
  if (x.rows() != x_hat.rows() || x.cols() != x_hat.cols())
    throw ContractError("mse: shape mismatch");
  const double n = static_cast<double>(x.rows());
  const double l = static_cast<double>(x.cols());
  return (x - x_hat).squaredNorm() / (n * l);
}

double support_recovery_rate(const std::vector<std::vector<Index>>& true_supports,
                             const std::vector<std::vector<Index>>& est_supports,
                             Index* skipped) {
  if (true_supports.size() != est_supports.size())
    throw ContractError("support_recovery_rate: list length mismatch");
  if (true_supports.empty())
    throw ContractError("support_recovery_rate: no trials");
  double sum = 0.0;
  Index counted = 0, empty = 0;
  for (size_t l = 0; l < true_supports.size(); ++l) {
    const auto& truth = true_supports[l];
    if (truth.empty()) {  // Bernoulli draws can produce an empty support
      ++empty;
      continue;
    }
    const auto& est = est_supports[l];
    Index hits = 0;
    for (Index i : truth)
      if (std::find(est.begin(), est.end(), i) != est.end()) ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(truth.size());
    ++counted;
  }
  if (skipped) *skipped = empty;
  if (counted == 0) throw ContractError("support_recovery_rate: all trials empty");
  return sum / static_cast<double>(counted);
}

double psnr(double mse_value) {
  if (mse_value < 0.0) throw ContractError("psnr: negative mse");
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  constexpr double peak = 255.0;  // r = 8 bits per pixel
  return 10.0 * std::log10(peak * peak / mse_value);
}

double mutual_coherence(const Matrix& d) {
  if (d.cols() < 2) throw ContractError("mutual_coherence: need K >= 2 columns");
  auto [normalized, scale] = normalize_columns(d);
  (void)scale;
  double mu = 0.0;
  for (Index i = 0; i < normalized.cols(); ++i)
    for (Index j = i + 1; j < normalized.cols(); ++j)
      mu = std::max(mu, std::abs(normalized.col(i).dot(normalized.col(j))));
  return mu;
}

double welch_bound(Index m, Index k) {
  if (m < 1 || k < m) throw ContractError("welch_bound: need 1 <= m <= k");
  if (k == 1) return 0.0;
  return std::sqrt(static_cast<double>(k - m) /
                   (static_cast<double>(m) * static_cast<double>(k - 1)));
}

bool omp_guarantee_holds(Index s, double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw ContractError("omp_guarantee_holds: mu must be in (0,1]");
  return static_cast<double>(s) < 0.5 * (1.0 + 1.0 / mu);
}

}  // namespace pwcs
