#include "pwcs/design.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "pwcs/metrics.hpp"
#include "pwcs/synthetic.hpp"

namespace pwcs {

SpectralDecomposition spectral_decomposition(const Matrix& a, Index m) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankTol * sv(0) : 0.0;
  Index n_bar = 0;
  while (n_bar < sv.size() && sv(n_bar) > cutoff) ++n_bar;
  SpectralDecomposition dec;
  dec.u = svd.matrixU();
  dec.sigma = sv.head(n_bar);
  dec.n_bar = n_bar;
  dec.m_bar = std::min(m, n_bar);
  return dec;
}

namespace {

// Theta1 = U * [diag(sigma_1..sigma_mbar) 0; 0 0] * Vtilde * Sigma^{-1},
// the cost-minimizing block on the row space (all factors in the reduced
// N_bar coordinates).
Matrix optimal_theta1(const SpectralDecomposition& dec, Index m,
                      const DesignFreedoms& freedoms) {
  const Index n_bar = dec.n_bar;
  const Index m_bar = dec.m_bar;

  Matrix sigma_pad = Matrix::Zero(m, n_bar);
  for (Index i = 0; i < m_bar; ++i) sigma_pad(i, i) = dec.sigma(i);

  Matrix vtilde = Matrix::Identity(n_bar, n_bar);
  if (freedoms.v22) {
    if (freedoms.v22->rows() != n_bar - m_bar || freedoms.v22->cols() != n_bar - m_bar)
      throw ContractError("v22 freedom has wrong dimensions");
    vtilde.bottomRightCorner(n_bar - m_bar, n_bar - m_bar) = *freedoms.v22;
  }

  Matrix theta1 = sigma_pad * vtilde * dec.sigma.cwiseInverse().asDiagonal();
  if (freedoms.u) {
    if (freedoms.u->rows() != m || freedoms.u->cols() != m)
      throw ContractError("u freedom has wrong dimensions");
    theta1 = *freedoms.u * theta1;
  }
  return theta1;
}

struct FullSvd {
  Matrix u;      // N x N
  Matrix v;      // K x K
  Vector sv;     // min(N,K) singular values, nonincreasing
  Index n_bar;   // numerical rank
};

FullSvd full_svd(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  FullSvd out{svd.matrixU(), svd.matrixV(), svd.singularValues(), 0};
  const double cutoff = out.sv.size() > 0 ? kRankTol * out.sv(0) : 0.0;
  while (out.n_bar < out.sv.size() && out.sv(out.n_bar) > cutoff) ++out.n_bar;
  return out;
}

// Best sensing matrix for a general Gram target: Phi minimizing
// ||target - Psi^T Phi^T Phi Psi||_F^2 given the SVD of Psi. The previous
// Phi supplies the block acting on the null space of Psi^T.
Matrix fit_gram_target(const FullSvd& psi_svd, const Matrix& target, Index m,
                       const Matrix& phi_prev) {
  const Index n_bar = psi_svd.n_bar;
  if (n_bar == 0) throw ContractError("rank-zero dictionary");
  const Index m_bar = std::min(m, n_bar);

  // Pull the target back into the reduced coordinates.
  Matrix v1 = psi_svd.v.leftCols(n_bar);
  Matrix b = v1.transpose() * target * v1;
  b = ((b + b.transpose()) * 0.5).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  if (eig.info() != Eigen::Success)
    throw Error("eigendecomposition failed in gram-target fit");

  // Eigenvalues come back ascending; keep the top m_bar, clamped to PSD.
  Matrix theta1 = Matrix::Zero(m, n_bar);
  const Vector sigma_inv = psi_svd.sv.head(n_bar).cwiseInverse();
  for (Index t = 0; t < m_bar; ++t) {
    const Index src = n_bar - 1 - t;
    const double lambda = eig.eigenvalues()(src);
    if (lambda <= 0.0) continue;
    theta1.row(t) =
        std::sqrt(lambda) *
        (eig.eigenvectors().col(src).transpose() * sigma_inv.asDiagonal());
  }

  const Index n = psi_svd.u.rows();
  Matrix theta(m, n);
  theta.leftCols(n_bar) = theta1;
  if (n_bar < n)
    theta.rightCols(n - n_bar) = phi_prev * psi_svd.u.rightCols(n - n_bar);
  return theta * psi_svd.u.transpose();
}

Matrix weighted_dictionary(const Dictionary& psi, const PriorProfile& prior) {
  if (prior.k() != psi.k())
    throw ContractError("prior has K=" + std::to_string(prior.k()) +
                        " but dictionary has K=" + std::to_string(psi.k()));
  return psi.entries() * prior.weight().asDiagonal();
}

}  // namespace

std::pair<SensingMatrix, DesignReport> design_pwdsmd(const Dictionary& psi,
                                                     const PriorProfile& prior,
                                                     const Matrix& phi0,
                                                     const DesignFreedoms& freedoms) {
  const Index m = phi0.rows();
  const Index n = psi.n();
  if (phi0.cols() != n)
    throw ContractError("phi0 must be M x N with N matching the dictionary");
  if (m < 1 || m > n) throw ContractError("need 1 <= M <= N");

  const Matrix psi_hat = weighted_dictionary(psi, prior);
  SpectralDecomposition dec = spectral_decomposition(psi_hat, m);
  if (dec.n_bar == 0) throw ContractError("weighted dictionary has rank zero");

  Matrix theta(m, n);
  theta.leftCols(dec.n_bar) = optimal_theta1(dec, m, freedoms);
  DesignReport report;
  if (dec.n_bar < n) {
    theta.rightCols(n - dec.n_bar) = phi0 * dec.u.rightCols(n - dec.n_bar);
    report.theta2_source = "phi0 projected on the null-space directions";
  } else {
    report.theta2_source = "empty (weighted dictionary has full row rank)";
  }
  Matrix phi = theta * dec.u.transpose();

  report.objective = pwdsmd_objective(phi, psi, prior);
  for (Index k = dec.m_bar; k < dec.n_bar; ++k)
    report.trailing_spectrum_sum += std::pow(dec.sigma(k), 4);

  SensingMatrix result(std::move(phi), DesignKind::pwdsmd,
                       {{"m", static_cast<double>(m)}, {"tau", prior.tau()}},
                       report.objective);
  return {std::move(result), std::move(report)};
}

std::pair<SensingMatrix, DesignReport> design_pwdsmd(const Dictionary& psi,
                                                     const PriorProfile& prior,
                                                     Index m, std::uint64_t seed) {
  RngStream rng(seed, {stream::kPhi0});
  Matrix phi0 = gen_gaussian(m, psi.n(), rng);
  return design_pwdsmd(psi, prior, phi0);
}

double pwdsmd_objective(const Matrix& phi, const Dictionary& psi,
                        const PriorProfile& prior) {
  if (phi.cols() != psi.n())
    throw ContractError("pwdsmd_objective: sensing matrix width must match N");
  const Matrix psi_hat = weighted_dictionary(psi, prior);
  const Matrix d = phi * psi_hat;
  return (psi_hat.transpose() * psi_hat - d.transpose() * d).squaredNorm();
}

double pwdsmd_objective(const SensingMatrix& phi, const Dictionary& psi,
                        const PriorProfile& prior) {
  return pwdsmd_objective(phi.entries(), psi, prior);
}

GramMatrix etf_project(const GramMatrix& g, double mu_bar) {
  if (!(mu_bar > 0.0 && mu_bar < 1.0))
    throw ContractError("etf_project: mu_bar must lie in (0,1)");
  Matrix out = g.entries;
  for (Index i = 0; i < out.rows(); ++i) {
    out(i, i) = 1.0;
    for (Index j = i + 1; j < out.cols(); ++j) {
      const double clamped =
          std::copysign(std::min(std::abs(out(i, j)), mu_bar), out(i, j));
      out(i, j) = clamped;
      out(j, i) = clamped;
    }
  }
  return GramMatrix(std::move(out), g.source);
}

namespace {

std::pair<SensingMatrix, DesignReport> design_random(const Dictionary& psi,
                                                     Index m, std::uint64_t seed) {
  RngStream rng(seed, {stream::kDesign});
  Matrix phi = gen_gaussian(m, psi.n(), rng);

  DesignReport report;
  report.theta2_source = "not applicable";
  const Matrix g_d = psi.entries().transpose() * psi.entries();
  const Matrix d = phi * psi.entries();
  report.objective = (g_d - d.transpose() * d).squaredNorm();
  SensingMatrix result(std::move(phi), DesignKind::random,
                       {{"m", static_cast<double>(m)},
                        {"seed", static_cast<double>(seed)}},
                       report.objective);
  return {std::move(result), std::move(report)};
}

// Closed form for the spectrum-preserving cost
// ||Psi Psi^T - Psi Psi^T Phi^T Phi Psi Psi^T||_F^2: per-eigenvalue inverse
// on the top-M spectrum of Psi Psi^T.
std::pair<SensingMatrix, DesignReport> design_dcs(const Dictionary& psi, Index m) {
  const Matrix pp = psi.entries() * psi.entries().transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(pp);
  if (eig.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const Index n = psi.n();
  // ascending -> descending
  Vector lambda(n);
  Matrix u(n, n);
  for (Index i = 0; i < n; ++i) {
    lambda(i) = std::max(eig.eigenvalues()(n - 1 - i), 0.0);
    u.col(i) = eig.eigenvectors().col(n - 1 - i);
  }
  const double cutoff = kRankTol * kRankTol * std::max(lambda(0), 0.0);
  if (m > 0 && (lambda.size() < m || lambda(m - 1) <= cutoff))
    throw ContractError("dictionary rank is below M; cannot invert spectrum");

  Matrix gamma = Matrix::Zero(m, n);
  for (Index i = 0; i < m; ++i) gamma(i, i) = 1.0 / std::sqrt(lambda(i));
  Matrix phi = gamma * u.transpose();

  DesignReport report;
  report.theta2_source = "not applicable";
  const Matrix g = pp * phi.transpose() * phi * pp;
  report.objective = (pp - g).squaredNorm();
  for (Index i = m; i < n; ++i) report.trailing_spectrum_sum += lambda(i) * lambda(i);
  SensingMatrix result(std::move(phi), DesignKind::dcs,
                       {{"m", static_cast<double>(m)}}, report.objective);
  return {std::move(result), std::move(report)};
}

// Inverse-spectrum frame: Gram of the equivalent dictionary driven toward
// the identity. The free orthonormal factors are fixed at identity.
std::pair<SensingMatrix, DesignReport> design_lg(const Dictionary& psi, Index m) {
  Eigen::JacobiSVD<Matrix> svd(psi.entries(), Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankTol * sv(0) : 0.0;
  Index n_bar = 0;
  while (n_bar < sv.size() && sv(n_bar) > cutoff) ++n_bar;
  if (n_bar < m)
    throw ContractError("dictionary rank is below M; cannot invert spectrum");

  Matrix gamma = Matrix::Zero(m, psi.n());
  for (Index i = 0; i < m; ++i) gamma(i, i) = 1.0 / sv(i);
  Matrix phi = gamma * svd.matrixU().transpose();

  DesignReport report;
  report.theta2_source = "not applicable";
  const Matrix d = phi * psi.entries();
  report.objective =
      (d.transpose() * d - Matrix::Identity(psi.k(), psi.k())).squaredNorm();
  SensingMatrix result(std::move(phi), DesignKind::lg,
                       {{"m", static_cast<double>(m)}}, report.objective);
  return {std::move(result), std::move(report)};
}

// Alternating trade-off design: ETF-project the current normalized Gram,
// then refit Phi against the convex combination
// (1-gamma) G_d + gamma G_t, which the Frobenius cost factors through.
std::pair<SensingMatrix, DesignReport> design_bh(const Dictionary& psi,
                                                 const BaselineParams& params,
                                                 std::uint64_t seed) {
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0))
    throw ContractError("bh: gamma must lie in [0,1]");
  const Index m = params.m;
  const double mu_bar =
      params.mu_bar ? *params.mu_bar : welch_bound(m, psi.k());

  Matrix phi;
  if (params.phi0) {
    if (params.phi0->rows() != m || params.phi0->cols() != psi.n())
      throw ContractError("bh: phi0 must be M x N");
    phi = *params.phi0;
  } else {
    RngStream rng(seed, {stream::kDesign});
    phi = gen_gaussian(m, psi.n(), rng);
  }

  const Matrix g_d = psi.entries().transpose() * psi.entries();
  const FullSvd psi_svd = full_svd(psi.entries());
  Matrix g_t = g_d;
  for (Index round = 0; round < params.iters; ++round) {
    const EquivalentDictionary eq = EquivalentDictionary::from_raw(phi * psi.entries());
    g_t = etf_project(gram(eq.normalized), mu_bar).entries;
    const Matrix target = (1.0 - params.gamma) * g_d + params.gamma * g_t;
    phi = fit_gram_target(psi_svd, target, m, phi);
  }

  DesignReport report;
  report.iterations = params.iters;
  report.theta2_source = "previous iterate projected on the null-space directions";
  const Matrix d = phi * psi.entries();
  const Matrix g = d.transpose() * d;
  report.objective = (1.0 - params.gamma) * (g_d - g).squaredNorm() +
                     params.gamma * (g_t - g).squaredNorm();
  SensingMatrix result(std::move(phi), DesignKind::bh,
                       {{"m", static_cast<double>(m)},
                        {"gamma", params.gamma},
                        {"iters", static_cast<double>(params.iters)},
                        {"mu_bar", mu_bar},
                        {"seed", static_cast<double>(seed)}},
                       report.objective);
  return {std::move(result), std::move(report)};
}

}  // namespace

std::pair<SensingMatrix, DesignReport> design_baseline(DesignKind kind,
                                                       const Dictionary& psi,
                                                       const BaselineParams& params,
                                                       std::uint64_t seed) {
  if (params.m < 1 || params.m > psi.n())
    throw ContractError("baseline designs need 1 <= M <= N");
  switch (kind) {
    case DesignKind::random: return design_random(psi, params.m, seed);
    case DesignKind::dcs: return design_dcs(psi, params.m);
    case DesignKind::lg: return design_lg(psi, params.m);
    case DesignKind::bh: return design_bh(psi, params, seed);
    case DesignKind::pwdsmd:
      throw ContractError("pwdsmd is not a baseline; call design_pwdsmd");
  }
  throw ContractError("unknown design kind");
}

}  // namespace pwcs
