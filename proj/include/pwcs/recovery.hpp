#pragma once

#include <vector>

#include "pwcs/core.hpp"

namespace pwcs {

struct RecoveryConfig {
  Index sparsity = 1;     // number of greedy selections S
  double beta = 1e-4;     // penalty slope for the probability-driven variant
  double g_bar = 0.0;     // mean nonzero magnitude for the log-odds variant
  double xi_clamp = 1e-6; // probabilities are clamped into [eps, 1-eps]
};

struct RecoveryResult {
  Vector coefficients;                // length K, zero off the support
  std::vector<Index> support;         // in selection order, no repeats
  std::vector<double> residual_norms; // ||r_0||..||r_S||, nonincreasing
  bool rank_deficient = false;        // a refit fell back to minimum-norm
};

/// Plain orthogonal matching pursuit on the normalized equivalent
/// dictionary; output coefficients are mapped back through the scale.
RecoveryResult omp(const Vector& y, const EquivalentDictionary& d, Index s);

/// Greedy pursuit whose selection score adds omega_k * tan(pi*xi - pi/2),
/// omega_k = beta*(S+1-k): atoms with utilization above 1/2 are promoted,
/// below 1/2 demoted, with the push fading over iterations.
RecoveryResult pdomp(const Vector& y, const SensingMatrix& phi,
                     const Dictionary& psi, const Vector& xi,
                     const RecoveryConfig& cfg);

/// Same algorithm on a precomputed equivalent dictionary.
RecoveryResult pdomp(const Vector& y, const EquivalentDictionary& d,
                     const Vector& xi, const RecoveryConfig& cfg);

/// Log-odds weighted pursuit on the unnormalized equivalent dictionary:
/// score adds (g_bar/2)(2S-1) * ln(p/(1-p)).
RecoveryResult lw_omp(const Vector& y, const EquivalentDictionary& d,
                      const Vector& p, const RecoveryConfig& cfg);

/// Minimizes ||y - atoms*c||_2; minimum-norm solution when rank-deficient
/// (sets *rank_deficient instead of failing).
Vector least_squares_on_support(const Vector& y, const Matrix& atoms,
                                bool* rank_deficient = nullptr);

/// Mean |value| over nonzero entries; the natural g_bar estimate from a
/// training coefficient matrix.
double mean_abs_nonzero(const Matrix& coeffs);

}  // namespace pwcs
