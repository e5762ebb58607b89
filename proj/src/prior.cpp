#include "pwcs/prior.hpp"

#include <cmath>

namespace pwcs {

namespace {

void check_probabilities(const Vector& p, const char* what) {
  for (Index i = 0; i < p.size(); ++i)
    if (!(p(i) >= 0.0 && p(i) <= 1.0))
      throw ContractError(std::string(what) + "(" + std::to_string(i) +
                          ")=" + std::to_string(p(i)) + " outside [0,1]");
}

}  // namespace

PriorProfile::PriorProfile(Vector xi, double tau) : xi_(std::move(xi)), tau_(tau) {
  if (!(tau > 0.0 && tau <= 1.0))
    throw ContractError("tau must lie in (0,1], got " + std::to_string(tau));
  check_probabilities(xi_, "xi");
  weight_ = Vector::Constant(xi_.size(), tau_) + (1.0 - tau_) * xi_;
}

Vector extract_prior(const Matrix& coeffs) {
  const Index l = coeffs.cols();
  if (l == 0) throw ContractError("extract_prior: empty batch (L=0)");
  Vector xi(coeffs.rows());
  for (Index i = 0; i < coeffs.rows(); ++i) {
    Index nonzeros = 0;
    for (Index j = 0; j < l; ++j)
      if (std::abs(coeffs(i, j)) > kPriorZeroTol) ++nonzeros;
    xi(i) = static_cast<double>(nonzeros) / static_cast<double>(l);
  }
  return xi;
}

PriorProfile weight_matrix(const Vector& xi, double tau) {
  return PriorProfile(xi, tau);
}

double average_binary_entropy(const Vector& p) {
  check_probabilities(p, "p");
  double sum = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double rho = p(i);
    if (rho > 0.0 && rho < 1.0)
      sum += -rho * std::log2(rho) - (1.0 - rho) * std::log2(1.0 - rho);
    // H(0) = H(1) = 0 by continuity
  }
  return sum / static_cast<double>(p.size());
}

double average_sparsity(const Vector& p) {
  check_probabilities(p, "p");
  return p.sum();
}

}  // namespace pwcs
