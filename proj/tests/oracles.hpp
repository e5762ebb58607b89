#pragma once

// Independent reference computations used to freeze expected values.
// Everything here recomputes results from first principles (plain loops,
// exhaustive enumeration) so the checks stay decoupled from the library's
// own linear-algebra paths.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pwcs/core.hpp"
#include "pwcs/rng.hpp"

namespace oracles {

using pwcs::Index;
using pwcs::Matrix;
using pwcs::Vector;

inline Matrix brute_force_product(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < b.cols(); ++j)
      for (Index t = 0; t < a.cols(); ++t) c(i, j) += a(i, t) * b(t, j);
  return c;
}

inline Matrix brute_force_gram(const Matrix& d) {
  Matrix g(d.cols(), d.cols());
  for (Index i = 0; i < d.cols(); ++i)
    for (Index j = 0; j < d.cols(); ++j) {
      double dot = 0.0;
      for (Index t = 0; t < d.rows(); ++t) dot += d(t, i) * d(t, j);
      g(i, j) = dot;
    }
  return g;
}

inline double max_offdiag_abs(const Matrix& g) {
  double best = 0.0;
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j)
      if (i != j) best = std::max(best, std::abs(g(i, j)));
  return best;
}

inline double scan_coherence(const Matrix& d) {
  double best = 0.0;
  for (Index i = 0; i < d.cols(); ++i)
    for (Index j = 0; j < d.cols(); ++j) {
      if (i == j) continue;
      const double num = std::abs(d.col(i).dot(d.col(j)));
      best = std::max(best, num / (d.col(i).norm() * d.col(j).norm()));
    }
  return best;
}

inline Matrix random_orthonormal(Index n, pwcs::RngStream& rng) {
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Minimal-residual support of size s, by trying every candidate set.
inline std::vector<Index> exhaustive_best_support(const Vector& y, const Matrix& d,
                                                  Index s) {
  std::vector<Index> best;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(s);
  const Index k = d.cols();

  auto evaluate = [&](const std::vector<Index>& supp) {
    Matrix atoms(d.rows(), s);
    for (Index t = 0; t < s; ++t) atoms.col(t) = d.col(supp[t]);
    Vector c = atoms.colPivHouseholderQr().solve(y);
    const double res = (y - atoms * c).norm();
    if (res < best_res) {
      best_res = res;
      best = supp;
    }
  };

  // enumerate combinations
  std::vector<Index> idx(s);
  auto recurse = [&](auto&& self, Index depth, Index start) -> void {
    if (depth == s) {
      evaluate(idx);
      return;
    }
    for (Index i = start; i < k; ++i) {
      idx[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

/// Trailing spectrum sum via the eigenvalues of A A^T (independent of the
/// SVD route used by the design).
inline double trailing_eigenvalue_square_sum(const Matrix& a, Index m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a * a.transpose());
  Vector lambda = eig.eigenvalues();  // ascending
  std::vector<double> desc(lambda.data(), lambda.data() + lambda.size());
  std::sort(desc.begin(), desc.end(), std::greater<>());
  const double cutoff = desc.empty() ? 0.0 : 1e-20 * desc.front();
  double sum = 0.0;
  Index rank = 0;
  for (double l : desc)
    if (l > cutoff) ++rank;
  for (Index i = std::min(m, rank); i < rank; ++i) sum += desc[i] * desc[i];
  return sum;
}

}  // namespace oracles
