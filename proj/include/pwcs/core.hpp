#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pwcs/errors.hpp"

namespace pwcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kSymmetryTol = 1e-10;

/// Column-normalized sparsifying basis, N x K. Columns are the atoms.
class Dictionary {
 public:
  /// Requires every column to have unit norm within 1e-12.
  explicit Dictionary(Matrix entries);

  /// Rescales each column to unit norm first; errors on a zero column.
  static Dictionary normalized(Matrix entries);

  const Matrix& entries() const { return entries_; }
  Index n() const { return entries_.rows(); }
  Index k() const { return entries_.cols(); }

 private:
  Matrix entries_;
};

enum class DesignKind { random, dcs, lg, bh, pwdsmd };

const char* to_string(DesignKind kind);
DesignKind design_kind_from_string(const std::string& name);

/// The M x N projection, with provenance of the design that produced it.
class SensingMatrix {
 public:
  SensingMatrix(Matrix entries, DesignKind design_id,
                std::map<std::string, double> params = {},
                std::optional<double> objective = std::nullopt);

  const Matrix& entries() const { return entries_; }
  Index m() const { return entries_.rows(); }
  Index n() const { return entries_.cols(); }
  DesignKind design_id() const { return design_id_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::optional<double>& objective() const { return objective_; }

 private:
  Matrix entries_;
  DesignKind design_id_;
  std::map<std::string, double> params_;
  std::optional<double> objective_;
};

/// D = Phi * Psi together with its column-normalized form D * diag(scale).
struct EquivalentDictionary {
  Matrix raw;         // M x K
  Matrix normalized;  // M x K, unit-norm columns
  Vector scale;       // scale(i) = 1 / ||raw.col(i)||

  static EquivalentDictionary from_raw(Matrix raw);
};

enum class GramSource { dictionary, equivalent };

/// G = D^T D; symmetric positive semidefinite.
struct GramMatrix {
  Matrix entries;  // K x K
  GramSource source;

  GramMatrix(Matrix entries, GramSource source);
};

/// Coefficient vector with explicit support.
struct SparseSignal {
  Vector coefficients;         // length K, zero off the support
  std::vector<Index> support;  // sorted, unique
  Index sparsity;              // |support| <= sparsity

  SparseSignal(Vector coefficients, std::vector<Index> support, Index sparsity);
};

/// L signal columns X = Psi * A + E with optional per-column SNR.
struct SignalBatch {
  Matrix signals;       // N x L
  Matrix coefficients;  // K x L
  Matrix noise;         // N x L
  std::optional<double> snr_db;

  Index l() const { return signals.cols(); }
};

/// Rescale columns to unit norm; returns the normalized matrix and the
/// per-column scale diag(1/||col||). Zero columns raise, naming the index.
std::pair<Matrix, Vector> normalize_columns(const Matrix& d);

/// D = Phi * Psi with its normalized form.
EquivalentDictionary equivalent_dictionary(const SensingMatrix& phi,
                                           const Dictionary& psi);

GramMatrix gram(const Matrix& d, GramSource source = GramSource::equivalent);

/// x = Psi * alpha restricted to the signal's support.
Vector reconstruct(const Dictionary& psi, const SparseSignal& alpha);

}  // namespace pwcs
