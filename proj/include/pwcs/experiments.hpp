#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pwcs/core.hpp"
#include "pwcs/synthetic.hpp"

namespace pwcs {

enum class CaseId {
  tau_sweep,
  snr_sweep,
  sparsity_sweep,
  m_sweep,
  beta_sweep,
  system_compare,
  system_sparsity,
  system_m,
  entropy_compare,
};

const char* to_string(CaseId id);
CaseId case_id_from_string(const std::string& name);

enum class RecoveryKind { omp, pdomp, lwomp };

const char* to_string(RecoveryKind kind);
RecoveryKind recovery_kind_from_string(const std::string& name);

/// One CS system under comparison: a sensing-matrix design paired with a
/// recovery algorithm. `tau` overrides the config default so that the
/// weighted design can run with and without prior in the same case.
struct AlgoPair {
  DesignKind design = DesignKind::random;
  RecoveryKind recovery = RecoveryKind::omp;
  std::optional<double> tau;
  std::string label;  // CSV design column; defaults to the design name

  std::string effective_label() const;
};

struct CaseConfig {
  CaseId case_id = CaseId::system_sparsity;
  Index m = 50, n = 200, k = 240;
  Index sparsity = 12;
  std::optional<double> snr_db = 20.0;
  Index trials = 1000;
  std::vector<Index> group_sizes = {160, 50, 20, 10};
  std::optional<std::vector<double>> group_probs;  // fixed probs, else (S/J)/K_j
  std::vector<AlgoPair> algorithms;
  std::string sweep_name;
  std::vector<double> sweep_values;
  std::uint64_t master_seed = 0;
  double tau = 0.2;
  double beta = 1e-4;
  double gamma = 0.5;
  Index bh_iters = 100;
  double g_bar = 0.7978845608028654;  // E|v| for the N(0,1) magnitude law
  SupportModel support_model = SupportModel::bernoulli;
  Index workers = 1;
};

/// Paper-style defaults for a case, optionally shrunk by an integer
/// desk-scale factor (dimensions, sparsity, trials and dimension-valued
/// sweeps divide by it; group sizes are re-apportioned to sum to K).
CaseConfig default_config(CaseId id, Index scale = 1);

/// Largest-remainder apportionment of `sizes` to a new total.
std::vector<Index> apportion_groups(const std::vector<Index>& sizes, Index total);

/// Group lengths of the four reference prior configurations (1..4),
/// apportioned to dimension k.
std::vector<Index> reference_groups(int simu, Index k);

struct ResultRow {
  double sweep_value;
  std::string design;
  std::string recovery;
  double mse;
  double e_r;
  Index trials;
  std::uint64_t seed;
  double mse_se;  // standard error of the per-trial MSE
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
};

/// Per-trial metrics at one sweep point, one row per algorithm pair.
/// e_r entries are NaN for trials whose true support was empty.
struct PointResult {
  AlgoPair algo;
  std::vector<double> mse_per_trial;
  std::vector<double> er_per_trial;

  double mean_mse() const;
  double se_mse() const;
  double mean_er() const;  // skips NaN trials
};

/// Runs one sweep point with common random numbers: every algorithm pair
/// sees the same batch and the same initial sensing matrix.
std::vector<PointResult> run_point(const CaseConfig& cfg, const Dictionary& psi,
                                   Index sweep_index);

/// Full case runner; deterministic function of the config (including
/// master_seed), independent of the worker count.
ExperimentResult run_case(const CaseConfig& cfg);

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);

/// JSON round-trip mirroring the config fields.
std::string config_to_json(const CaseConfig& cfg);
CaseConfig config_from_json(const std::string& text);
CaseConfig load_config(const std::filesystem::path& path);

}  // namespace pwcs
