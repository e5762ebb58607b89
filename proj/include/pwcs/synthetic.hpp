#pragma once

#include <optional>
#include <vector>

#include "pwcs/core.hpp"
#include "pwcs/rng.hpp"

namespace pwcs {

// The sparse model is Bernoulli per index: alpha(i) = v(i)*b(i) with
// v ~ N(0,1) and b ~ Bernoulli(p(i)) independent, p constant within each
// group. A group spec expands to the per-index probability vector p.

class GroupSpec {
 public:
  /// Probabilities chosen so the expected support size equals `sparsity`:
  /// p'(j) = (S/J) / K_j. Errors if any group is too small for that.
  static GroupSpec from_sparsity(std::vector<Index> group_sizes, Index sparsity);
  static GroupSpec from_probs(std::vector<Index> group_sizes,
                              std::vector<double> group_probs);

  const std::vector<Index>& group_sizes() const { return sizes_; }
  const std::vector<double>& group_probs() const { return probs_; }
  std::optional<Index> sparsity() const { return sparsity_; }
  Index k() const { return k_; }
  Index groups() const { return static_cast<Index>(sizes_.size()); }

 private:
  GroupSpec(std::vector<Index> sizes, std::vector<double> probs,
            std::optional<Index> sparsity);

  std::vector<Index> sizes_;
  std::vector<double> probs_;
  std::optional<Index> sparsity_;
  Index k_ = 0;
};

/// Contiguous blocks of length K_j filled with p'(j).
Vector expand_groups(const GroupSpec& spec);

/// One Bernoulli draw: support from b(i) ~ Bernoulli(p(i)), values N(0,1).
SparseSignal gen_sparse(const Vector& p, RngStream& rng);
SparseSignal gen_sparse(const Vector& p, std::uint64_t seed);

/// Exact-count variant: places a fixed number of nonzeros per group
/// (S/J each, remainders going to the leading groups), uniformly placed.
SparseSignal gen_sparse_exact(const GroupSpec& spec, RngStream& rng);

/// N(0,1) entries, columns rescaled to unit norm.
Dictionary gen_dictionary(Index n, Index k, RngStream& rng);
Dictionary gen_dictionary(Index n, Index k, std::uint64_t seed);

/// M x N matrix of i.i.d. N(0,1) entries.
Matrix gen_gaussian(Index rows, Index cols, RngStream& rng);

enum class SupportModel { bernoulli, exact_count };

/// L columns x_l = Psi a_l + e_l; e_l is scaled so every column meets
/// snr_db exactly (absent snr_db -> e = 0). Column l draws from
/// rng.child(l), so batches are reproducible for any evaluation order.
SignalBatch gen_batch(const Dictionary& psi, const GroupSpec& spec, Index l,
                      std::optional<double> snr_db, const RngStream& rng,
                      SupportModel model = SupportModel::bernoulli);
SignalBatch gen_batch(const Dictionary& psi, const Vector& p, Index l,
                      std::optional<double> snr_db, const RngStream& rng);

/// Columns whose signal had zero energy (noise suppressed there).
std::vector<Index> zero_energy_columns(const SignalBatch& batch);

/// Parses {"group_sizes": [...], "sparsity": n} or
/// {"group_sizes": [...], "group_probs": [...]}.
GroupSpec group_spec_from_json(const std::string& text);
std::string group_spec_to_json(const GroupSpec& spec);

}  // namespace pwcs
