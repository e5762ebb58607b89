#include "pwcs/core.hpp"

#include <algorithm>
#include <cmath>

namespace pwcs {

Dictionary::Dictionary(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1)
    throw ContractError("dictionary must have at least one row and column");
  for (Index j = 0; j < entries_.cols(); ++j) {
    const double norm = entries_.col(j).norm();
    if (std::abs(norm - 1.0) > kUnitNormTol)
      throw ContractError("dictionary column " + std::to_string(j) +
                          " is not unit-norm (norm=" + std::to_string(norm) + ")");
  }
}

Dictionary Dictionary::normalized(Matrix entries) {
  auto [m, scale] = normalize_columns(entries);
  (void)scale;
  return Dictionary(std::move(m));
}

const char* to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::random: return "random";
    case DesignKind::dcs: return "dcs";
    case DesignKind::lg: return "lg";
    case DesignKind::bh: return "bh";
    case DesignKind::pwdsmd: return "pwdsmd";
  }
  return "?";
}

DesignKind design_kind_from_string(const std::string& name) {
  if (name == "random") return DesignKind::random;
  if (name == "dcs") return DesignKind::dcs;
  if (name == "lg") return DesignKind::lg;
  if (name == "bh") return DesignKind::bh;
  if (name == "pwdsmd") return DesignKind::pwdsmd;
  throw ContractError("unknown design kind '" + name + "'");
}

SensingMatrix::SensingMatrix(Matrix entries, DesignKind design_id,
                             std::map<std::string, double> params,
                             std::optional<double> objective)
    : entries_(std::move(entries)),
      design_id_(design_id),
      params_(std::move(params)),
      objective_(objective) {
  // M <= N; equality is allowed so the no-compression identity cases are
  // representable, though pipelines use M < N.
  if (entries_.rows() < 1)
    throw ContractError("sensing matrix needs at least one row");
  if (entries_.rows() > entries_.cols())
    throw ContractError("sensing matrix must satisfy M <= N, got M=" +
                        std::to_string(entries_.rows()) +
                        " N=" + std::to_string(entries_.cols()));
  if (objective_ && *objective_ < 0.0)
    throw ContractError("design objective must be nonnegative");
}

std::pair<Matrix, Vector> normalize_columns(const Matrix& d) {
  Matrix normalized(d.rows(), d.cols());
  Vector scale(d.cols());
  for (Index j = 0; j < d.cols(); ++j) {
    const double norm = d.col(j).norm();
    if (norm == 0.0)
      throw DegenerateColumnError(
          "column " + std::to_string(j) + " has zero norm", j);
    scale(j) = 1.0 / norm;
    normalized.col(j) = d.col(j) * scale(j);
  }
  return {std::move(normalized), std::move(scale)};
}

EquivalentDictionary EquivalentDictionary::from_raw(Matrix raw) {
  auto [normalized, scale] = normalize_columns(raw);
  return {std::move(raw), std::move(normalized), std::move(scale)};
}

EquivalentDictionary equivalent_dictionary(const SensingMatrix& phi,
                                           const Dictionary& psi) {
  if (phi.n() != psi.n())
    throw ContractError("sensing matrix has N=" + std::to_string(phi.n()) +
                        " but dictionary has N=" + std::to_string(psi.n()));
  return EquivalentDictionary::from_raw(phi.entries() * psi.entries());
}

GramMatrix::GramMatrix(Matrix e, GramSource s) : entries(std::move(e)), source(s) {
  if (entries.rows() != entries.cols())
    throw ContractError("Gram matrix must be square");
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale)
    throw ContractError("Gram matrix is not symmetric");
}

GramMatrix gram(const Matrix& d, GramSource source) {
  if (d.cols() < 1) throw ContractError("gram: input needs at least one column");
  Matrix g = d.transpose() * d;
  g = ((g + g.transpose()) * 0.5).eval();  // kill GEMM rounding asymmetry
  return GramMatrix(std::move(g), source);
}

SparseSignal::SparseSignal(Vector coeffs, std::vector<Index> supp, Index s)
    : coefficients(std::move(coeffs)), support(std::move(supp)), sparsity(s) {
  if (static_cast<Index>(support.size()) > sparsity)
    throw ContractError("support larger than declared sparsity");
  std::vector<char> on(static_cast<size_t>(coefficients.size()), 0);
  for (Index i : support) {
    if (i < 0 || i >= coefficients.size())
      throw ContractError("support index out of range");
    on[static_cast<size_t>(i)] = 1;
  }
  for (Index i = 0; i < coefficients.size(); ++i)
    if (!on[static_cast<size_t>(i)] && coefficients(i) != 0.0)
      throw ContractError("nonzero coefficient off the support at index " +
                          std::to_string(i));
}

Vector reconstruct(const Dictionary& psi, const SparseSignal& alpha) {
  if (alpha.coefficients.size() != psi.k())
    throw ContractError("coefficient length does not match dictionary");
  Vector x = Vector::Zero(psi.n());
  for (Index i : alpha.support) x += alpha.coefficients(i) * psi.entries().col(i);
  return x;
}

}  // namespace pwcs
