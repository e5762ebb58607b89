#pragma once

#include <vector>

#include "pwcs/core.hpp"

namespace pwcs {

/// (1/L) * sum_l ||x_l - xhat_l||^2 / N.
double mse(const Matrix& x, const Matrix& x_hat);

/// (1/L) * sum_l |I_l ∩ Ihat_l| / |I_l|, skipping trials with empty true
/// support. `skipped`, when given, receives the number of skipped trials.
double support_recovery_rate(const std::vector<std::vector<Index>>& true_supports,
                             const std::vector<std::vector<Index>>& est_supports,
                             Index* skipped = nullptr);

/// 10*log10((2^8-1)^2 / mse); +infinity for mse == 0.
double psnr(double mse_value);

/// Largest normalized inner product over distinct column pairs.
double mutual_coherence(const Matrix& d);

/// sqrt((k-m) / (m*(k-1))), the coherence lower bound for an m x k frame.
double welch_bound(Index m, Index k);

/// True iff s < (1 + 1/mu) / 2, the exact-recovery sparsity condition.
bool omp_guarantee_holds(Index s, double mu);

}  // namespace pwcs
