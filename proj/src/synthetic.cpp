#include "pwcs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

namespace pwcs {

GroupSpec::GroupSpec(std::vector<Index> sizes, std::vector<double> probs,
                     std::optional<Index> sparsity)
    : sizes_(std::move(sizes)), probs_(std::move(probs)), sparsity_(sparsity) {
  if (sizes_.empty() || sizes_.size() != probs_.size())
    throw ConfigError("group spec needs matching, non-empty sizes and probs");
  for (size_t j = 0; j < sizes_.size(); ++j) {
    if (sizes_[j] < 1) throw ConfigError("group sizes must be >= 1");
    if (!(probs_[j] >= 0.0 && probs_[j] <= 1.0))
      throw ConfigError("infeasible group " + std::to_string(j) +
                        ": probability " + std::to_string(probs_[j]) +
                        " outside [0,1]");
    k_ += sizes_[j];
  }
}

GroupSpec GroupSpec::from_sparsity(std::vector<Index> group_sizes, Index sparsity) {
  if (sparsity < 1) throw ConfigError("sparsity must be >= 1");
  const double per_group =
      static_cast<double>(sparsity) / static_cast<double>(group_sizes.size());
  std::vector<double> probs;
  probs.reserve(group_sizes.size());
  for (Index kj : group_sizes) {
    if (kj < 1) throw ConfigError("group sizes must be >= 1");
    const double p = per_group / static_cast<double>(kj);
    if (p > 1.0)
      throw ConfigError("infeasible group: size " + std::to_string(kj) +
                        " < S/J = " + std::to_string(per_group));
    probs.push_back(p);
  }
  return GroupSpec(std::move(group_sizes), std::move(probs), sparsity);
}

GroupSpec GroupSpec::from_probs(std::vector<Index> group_sizes,
                                std::vector<double> group_probs) {
  return GroupSpec(std::move(group_sizes), std::move(group_probs), std::nullopt);
}

Vector expand_groups(const GroupSpec& spec) {
  Vector p(spec.k());
  Index at = 0;
  for (Index j = 0; j < spec.groups(); ++j) {
    p.segment(at, spec.group_sizes()[j]).setConstant(spec.group_probs()[j]);
    at += spec.group_sizes()[j];
  }
  return p;
}

SparseSignal gen_sparse(const Vector& p, RngStream& rng) {
  Vector alpha = Vector::Zero(p.size());
  std::vector<Index> support;
  for (Index i = 0; i < p.size(); ++i) {
    if (!(p(i) >= 0.0 && p(i) <= 1.0))
      throw ContractError("gen_sparse: p outside [0,1]");
    if (rng.uniform() < p(i)) {
      alpha(i) = rng.normal();
      support.push_back(i);
    }
  }
  const Index s = static_cast<Index>(support.size());
  return SparseSignal(std::move(alpha), std::move(support), s);
}

SparseSignal gen_sparse(const Vector& p, std::uint64_t seed) {
  RngStream rng(seed);
  return gen_sparse(p, rng);
}

SparseSignal gen_sparse_exact(const GroupSpec& spec, RngStream& rng) {
  if (!spec.sparsity())
    throw ConfigError("exact-count generation needs a sparsity-built group spec");
  const Index s = *spec.sparsity();
  const Index j_count = spec.groups();
  Vector alpha = Vector::Zero(spec.k());
  std::vector<Index> support;
  Index offset = 0;
  for (Index j = 0; j < j_count; ++j) {
    const Index kj = spec.group_sizes()[j];
    Index count = s / j_count + (j < s % j_count ? 1 : 0);
    if (count > kj)
      throw ConfigError("infeasible group: cannot place " + std::to_string(count) +
                        " nonzeros in a group of " + std::to_string(kj));
    // partial Fisher-Yates: first `count` entries become the chosen indices
    std::vector<Index> idx(kj);
    std::iota(idx.begin(), idx.end(), offset);
    for (Index t = 0; t < count; ++t) {
      const Index pick = t + static_cast<Index>(rng.below(kj - t));
      std::swap(idx[t], idx[pick]);
      alpha(idx[t]) = rng.normal();
      support.push_back(idx[t]);
    }
    offset += kj;
  }
  std::sort(support.begin(), support.end());
  return SparseSignal(std::move(alpha), std::move(support), s);
}

Matrix gen_gaussian(Index rows, Index cols, RngStream& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

Dictionary gen_dictionary(Index n, Index k, RngStream& rng) {
  if (n < 1 || k < 1) throw ContractError("gen_dictionary: need n,k >= 1");
  return Dictionary::normalized(gen_gaussian(n, k, rng));
}

Dictionary gen_dictionary(Index n, Index k, std::uint64_t seed) {
  RngStream rng(seed, {stream::kDictionary});
  return gen_dictionary(n, k, rng);
}

SignalBatch gen_batch(const Dictionary& psi, const GroupSpec& spec, Index l,
                      std::optional<double> snr_db, const RngStream& rng,
                      SupportModel model) {
  if (l < 1) throw ContractError("gen_batch: need l >= 1");
  const Vector p = expand_groups(spec);
  if (p.size() != psi.k())
    throw ContractError("gen_batch: group spec K does not match dictionary");

  Matrix coeffs(psi.k(), l);
  Matrix noise = Matrix::Zero(psi.n(), l);
  Matrix signals(psi.n(), l);
  for (Index col = 0; col < l; ++col) {
    RngStream column_rng = rng.child(static_cast<std::uint64_t>(col));
    SparseSignal alpha = model == SupportModel::bernoulli
                             ? gen_sparse(p, column_rng)
                             : gen_sparse_exact(spec, column_rng);
    coeffs.col(col) = alpha.coefficients;
    Vector clean = psi.entries() * alpha.coefficients;
    if (snr_db) {
      const double signal_norm = clean.norm();
      if (signal_norm > 0.0) {
        Vector g(psi.n());
        for (Index i = 0; i < psi.n(); ++i) g(i) = column_rng.normal();
        const double target = signal_norm / std::pow(10.0, *snr_db / 20.0);
        noise.col(col) = g * (target / g.norm());
      }
      // zero-energy column: leave the noise at zero
    }
    signals.col(col) = clean + noise.col(col);
  }
  return SignalBatch{std::move(signals), std::move(coeffs), std::move(noise), snr_db};
}

SignalBatch gen_batch(const Dictionary& psi, const Vector& p, Index l,
                      std::optional<double> snr_db, const RngStream& rng) {
  std::vector<Index> sizes;
  std::vector<double> probs;
  for (Index i = 0; i < p.size(); ++i) {
    sizes.push_back(1);
    probs.push_back(p(i));
  }
  return gen_batch(psi, GroupSpec::from_probs(std::move(sizes), std::move(probs)),
                   l, snr_db, rng, SupportModel::bernoulli);
}

std::vector<Index> zero_energy_columns(const SignalBatch& batch) {
  std::vector<Index> flagged;
  for (Index col = 0; col < batch.coefficients.cols(); ++col)
    if (batch.coefficients.col(col).isZero(0.0)) flagged.push_back(col);
  return flagged;
}

GroupSpec group_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("group spec JSON: ") + e.what());
  }
  try {
    auto sizes = j.at("group_sizes").get<std::vector<Index>>();
    if (j.contains("group_probs"))
      return GroupSpec::from_probs(std::move(sizes),
                                   j["group_probs"].get<std::vector<double>>());
    return GroupSpec::from_sparsity(std::move(sizes), j.at("sparsity").get<Index>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("group spec JSON: ") + e.what());
  }
}

std::string group_spec_to_json(const GroupSpec& spec) {
  nlohmann::json j;
  j["group_sizes"] = spec.group_sizes();
  if (spec.sparsity()) j["sparsity"] = *spec.sparsity();
  else j["group_probs"] = spec.group_probs();
  return j.dump(2);
}

}  // namespace pwcs
