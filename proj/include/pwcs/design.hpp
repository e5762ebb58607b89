#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pwcs/core.hpp"
#include "pwcs/prior.hpp"
#include "pwcs/rng.hpp"

namespace pwcs {

// Singular values below kRankTol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-10;

/// SVD summary of the weighted dictionary used by the closed-form design.
struct SpectralDecomposition {
  Matrix u;      // N x N orthonormal left factor
  Vector sigma;  // strictly positive, nonincreasing, length n_bar
  Index n_bar;   // numerical rank
  Index m_bar;   // min(M, n_bar)
};

SpectralDecomposition spectral_decomposition(const Matrix& a, Index m);

struct DesignReport {
  double objective = 0.0;             // achieved design cost
  double trailing_spectrum_sum = 0.0; // analytic minimum sum_{k>m_bar} sigma_k^4
  std::string theta2_source;          // how the null-space block was filled
  Index iterations = 0;               // rounds, for iterative designs
};

/// Orthonormal factors the closed-form solution leaves free; identity by
/// default so the design is deterministic. Any choice attains the optimum.
struct DesignFreedoms {
  std::optional<Matrix> u;    // M x M orthonormal
  std::optional<Matrix> v22;  // (n_bar - m_bar) x (n_bar - m_bar) orthonormal
};

/// Probability-weighted design: minimizes ||W(Psi^T Psi - G)W||_F^2 over
/// the sensing matrix, via the SVD of Psi*W. phi0 fills the block acting
/// on the null space of (Psi*W)^T.
std::pair<SensingMatrix, DesignReport> design_pwdsmd(
    const Dictionary& psi, const PriorProfile& prior, const Matrix& phi0,
    const DesignFreedoms& freedoms = {});

/// Convenience: phi0 drawn as a seeded M x N Gaussian matrix.
std::pair<SensingMatrix, DesignReport> design_pwdsmd(const Dictionary& psi,
                                                     const PriorProfile& prior,
                                                     Index m, std::uint64_t seed);

/// ||W(Psi^T Psi - Psi^T Phi^T Phi Psi)W||_F^2, the weighted design cost.
double pwdsmd_objective(const Matrix& phi, const Dictionary& psi,
                        const PriorProfile& prior);
double pwdsmd_objective(const SensingMatrix& phi, const Dictionary& psi,
                        const PriorProfile& prior);

struct BaselineParams {
  Index m = 0;
  double gamma = 0.5;                // bh trade-off in [0,1]
  Index iters = 100;                 // bh alternating rounds
  std::optional<double> mu_bar;      // bh ETF threshold; default Welch bound
  std::optional<Matrix> phi0;        // bh starting point; default seeded Gaussian
};

/// Comparison designs: random Gaussian, the spectral Gram-preserving
/// closed form (dcs), the inverse-spectrum frame (lg), and the alternating
/// ETF trade-off design (bh).
std::pair<SensingMatrix, DesignReport> design_baseline(DesignKind kind,
                                                       const Dictionary& psi,
                                                       const BaselineParams& params,
                                                       std::uint64_t seed);

/// Relaxed-ETF projection: unit diagonal, off-diagonal magnitudes clamped
/// to mu_bar. Idempotent.
GramMatrix etf_project(const GramMatrix& g, double mu_bar);

}  // namespace pwcs
