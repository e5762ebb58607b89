#pragma once

#include "pwcs/core.hpp"

namespace pwcs {

// Recovered coefficients carry rounding noise, so "nonzero" means
// magnitude above this when counting row utilization.
inline constexpr double kPriorZeroTol = 1e-12;

/// Per-atom utilization probabilities with the derived diagonal weights
/// w(i) = tau + (1 - tau) * xi(i), so w(i) in [tau, 1].
class PriorProfile {
 public:
  PriorProfile(Vector xi, double tau);

  const Vector& xi() const { return xi_; }
  double tau() const { return tau_; }
  const Vector& weight() const { return weight_; }  // diagonal of W
  Index k() const { return xi_.size(); }

 private:
  Vector xi_;
  double tau_;
  Vector weight_;
};

/// xi(i) = (nonzeros in row i) / L for a K x L coefficient matrix.
Vector extract_prior(const Matrix& coeffs);

/// Builds the diagonal weight profile; tau must lie in (0, 1].
PriorProfile weight_matrix(const Vector& xi, double tau);

/// (1/K) * sum_i H(p(i)) with H the base-2 binary entropy, H(0)=H(1)=0.
double average_binary_entropy(const Vector& p);

/// Expected support size sum_i p(i).
double average_sparsity(const Vector& p);

}  // namespace pwcs
