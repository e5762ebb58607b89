#include "pwcs/recovery.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>

#include "pwcs/prior.hpp"

namespace pwcs {

Vector least_squares_on_support(const Vector& y, const Matrix& atoms,
                                bool* rank_deficient) {
  if (atoms.rows() != y.size())
    throw ContractError("least squares: atom height does not match y");
  Eigen::JacobiSVD<Matrix> svd(atoms, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (rank_deficient && svd.rank() < atoms.cols()) *rank_deficient = true;
  return svd.solve(y);  // minimum-norm when rank-deficient
}

double mean_abs_nonzero(const Matrix& coeffs) {
  double sum = 0.0;
  Index count = 0;
  for (Index j = 0; j < coeffs.cols(); ++j)
    for (Index i = 0; i < coeffs.rows(); ++i)
      if (std::abs(coeffs(i, j)) > kPriorZeroTol) {
        sum += std::abs(coeffs(i, j));
        ++count;
      }
  if (count == 0) throw ContractError("mean_abs_nonzero: no nonzero entries");
  return sum / static_cast<double>(count);
}

namespace {

// Shared greedy loop: S rounds of penalized correlation selection followed
// by a least-squares refit on the accumulated atoms. `atom_penalty` is a
// per-atom additive term, rescaled by omega(k) each iteration.
template <typename Omega>
RecoveryResult greedy_pursuit(const Vector& y, const Matrix& dict, Index s,
                              const Vector* atom_penalty, Omega omega,
                              const Vector* scale) {
  const Index m = dict.rows();
  const Index k_atoms = dict.cols();
  if (s < 1) throw ContractError("sparsity must be >= 1");
  if (s > m) throw ContractError("sparsity " + std::to_string(s) +
                                 " exceeds measurement dimension " +
                                 std::to_string(m));
  if (y.size() != m) throw ContractError("y length does not match dictionary");

  RecoveryResult result;
  result.support.reserve(s);
  result.residual_norms.reserve(s + 1);

  Vector residual = y;
  result.residual_norms.push_back(residual.norm());
  std::vector<char> used(static_cast<size_t>(k_atoms), 0);
  Matrix selected(m, s);
  Vector fitted;

  for (Index k = 1; k <= s; ++k) {
    const Vector correlation = dict.transpose() * residual;
    const double w = omega(k);
    Index best = -1;
    double best_score = 0.0;
    for (Index i = 0; i < k_atoms; ++i) {
      if (used[static_cast<size_t>(i)]) continue;
      double score = std::abs(correlation(i));
      if (atom_penalty) score += w * (*atom_penalty)(i);
      if (best < 0 || score > best_score) {  // ties keep the lowest index
        best = i;
        best_score = score;
      }
    }
    used[static_cast<size_t>(best)] = 1;
    result.support.push_back(best);
    selected.col(k - 1) = dict.col(best);

    fitted = least_squares_on_support(y, selected.leftCols(k),
                                      &result.rank_deficient);
    residual = y - selected.leftCols(k) * fitted;
    result.residual_norms.push_back(residual.norm());
  }

  result.coefficients = Vector::Zero(k_atoms);
  for (Index j = 0; j < s; ++j) {
    const Index i = result.support[static_cast<size_t>(j)];
    result.coefficients(i) = scale ? (*scale)(i)*fitted(j) : fitted(j);
  }
  return result;
}

Vector clamp01(const Vector& p, double eps) {
  if (!(eps > 0.0 && eps < 0.5))
    throw ContractError("probability clamp must lie in (0, 0.5)");
  return p.cwiseMax(eps).cwiseMin(1.0 - eps);
}

}  // namespace

RecoveryResult omp(const Vector& y, const EquivalentDictionary& d, Index s) {
  return greedy_pursuit(y, d.normalized, s, nullptr,
                        [](Index) { return 0.0; }, &d.scale);
}

RecoveryResult pdomp(const Vector& y, const SensingMatrix& phi,
                     const Dictionary& psi, const Vector& xi,
                     const RecoveryConfig& cfg) {
  return pdomp(y, equivalent_dictionary(phi, psi), xi, cfg);
}

RecoveryResult pdomp(const Vector& y, const EquivalentDictionary& d,
                     const Vector& xi, const RecoveryConfig& cfg) {
  if (xi.size() != d.raw.cols())
    throw ContractError("pdomp: xi length does not match dictionary");
  if (cfg.beta < 0.0) throw ContractError("pdomp: beta must be >= 0");
  for (Index i = 0; i < xi.size(); ++i)
    if (!(xi(i) >= 0.0 && xi(i) <= 1.0))
      throw ContractError("pdomp: xi outside [0,1]");

  const Vector xi_c = clamp01(xi, cfg.xi_clamp);
  Vector penalty(xi_c.size());
  for (Index i = 0; i < xi_c.size(); ++i)
    penalty(i) = std::tan(std::numbers::pi * xi_c(i) - std::numbers::pi / 2);

  const Index s = cfg.sparsity;
  const double beta = cfg.beta;
  return greedy_pursuit(
      y, d.normalized, s, &penalty,
      [s, beta](Index k) { return beta * static_cast<double>(s + 1 - k); },
      &d.scale);
}

RecoveryResult lw_omp(const Vector& y, const EquivalentDictionary& d,
                      const Vector& p, const RecoveryConfig& cfg) {
  if (p.size() != d.raw.cols())
    throw ContractError("lw_omp: p length does not match dictionary");
  if (cfg.g_bar < 0.0) throw ContractError("lw_omp: g_bar must be >= 0");
  for (Index i = 0; i < p.size(); ++i)
    if (!(p(i) >= 0.0 && p(i) <= 1.0))
      throw ContractError("lw_omp: p outside [0,1]");

  const Vector p_c = clamp01(p, cfg.xi_clamp);
  const double weight =
      cfg.g_bar / 2.0 * (2.0 * static_cast<double>(cfg.sparsity) - 1.0);
  Vector penalty(p_c.size());
  for (Index i = 0; i < p_c.size(); ++i)
    penalty(i) = weight * std::log(p_c(i) / (1.0 - p_c(i)));

  // the log-odds derivation assumes the raw (unnormalized) dictionary
  return greedy_pursuit(y, d.raw, cfg.sparsity, &penalty,
                        [](Index) { return 1.0; }, nullptr);
}

}  // namespace pwcs
