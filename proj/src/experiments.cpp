#include "pwcs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>

#include <nlohmann/json.hpp>

#include "pwcs/design.hpp"
#include "pwcs/matrix_io.hpp"
#include "pwcs/metrics.hpp"
#include "pwcs/prior.hpp"
#include "pwcs/recovery.hpp"

namespace pwcs {

using nlohmann::json;

const char* to_string(CaseId id) {
  switch (id) {
    case CaseId::tau_sweep: return "tau_sweep";
    case CaseId::snr_sweep: return "snr_sweep";
    case CaseId::sparsity_sweep: return "sparsity_sweep";
    case CaseId::m_sweep: return "m_sweep";
    case CaseId::beta_sweep: return "beta_sweep";
    case CaseId::system_compare: return "system_compare";
    case CaseId::system_sparsity: return "system_sparsity";
    case CaseId::system_m: return "system_m";
    case CaseId::entropy_compare: return "entropy_compare";
  }
  return "?";
}

CaseId case_id_from_string(const std::string& name) {
  for (CaseId id :
       {CaseId::tau_sweep, CaseId::snr_sweep, CaseId::sparsity_sweep,
        CaseId::m_sweep, CaseId::beta_sweep, CaseId::system_compare,
        CaseId::system_sparsity, CaseId::system_m, CaseId::entropy_compare})
    if (name == to_string(id)) return id;
  throw ConfigError("unknown case id '" + name + "'");
}

const char* to_string(RecoveryKind kind) {
  switch (kind) {
    case RecoveryKind::omp: return "omp";
    case RecoveryKind::pdomp: return "pdomp";
    case RecoveryKind::lwomp: return "lwomp";
  }
  return "?";
}

RecoveryKind recovery_kind_from_string(const std::string& name) {
  if (name == "omp") return RecoveryKind::omp;
  if (name == "pdomp") return RecoveryKind::pdomp;
  if (name == "lwomp") return RecoveryKind::lwomp;
  throw ConfigError("unknown recovery kind '" + name + "'");
}

std::string AlgoPair::effective_label() const {
  return label.empty() ? to_string(design) : label;
}

std::vector<Index> apportion_groups(const std::vector<Index>& sizes, Index total) {
  const double source_total =
      static_cast<double>(std::accumulate(sizes.begin(), sizes.end(), Index{0}));
  std::vector<Index> out(sizes.size());
  std::vector<std::pair<double, size_t>> remainders;
  Index assigned = 0;
  for (size_t j = 0; j < sizes.size(); ++j) {
    const double quota =
        static_cast<double>(sizes[j]) * static_cast<double>(total) / source_total;
    out[j] = std::max<Index>(1, static_cast<Index>(std::floor(quota)));
    assigned += out[j];
    remainders.push_back({quota - std::floor(quota), j});
  }
  // largest remainder first; ties resolved by lower group index
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  size_t at = 0;
  while (assigned < total) {
    out[remainders[at % remainders.size()].second] += 1;
    ++assigned;
    ++at;
  }
  while (assigned > total) {
    // shrink the largest group, never below 1
    auto it = std::max_element(out.begin(), out.end());
    if (*it <= 1) throw ConfigError("cannot apportion groups: total too small");
    *it -= 1;
    --assigned;
  }
  return out;
}

std::vector<Index> reference_groups(int simu, Index k) {
  std::vector<Index> base;
  switch (simu) {
    case 1: base = {60, 60, 60, 60}; break;
    case 2: base = {100, 100, 20, 20}; break;
    case 3: base = {160, 50, 20, 10}; break;
    case 4: base = {204, 12, 12, 12}; break;
    default: throw ConfigError("reference group index must be 1..4");
  }
  return apportion_groups(base, k);
}

namespace {

Index scale_dim(Index value, Index factor) {
  return std::max<Index>(
      1, static_cast<Index>(std::llround(static_cast<double>(value) /
                                         static_cast<double>(factor))));
}

std::vector<double> scale_values(const std::vector<double>& values, Index factor) {
  std::vector<double> out;
  for (double v : values) {
    const double scaled = static_cast<double>(
        scale_dim(static_cast<Index>(std::llround(v)), factor));
    if (out.empty() || out.back() != scaled) out.push_back(scaled);
  }
  return out;
}

std::vector<AlgoPair> six_designs_with(RecoveryKind rec) {
  return {
      {DesignKind::random, rec, std::nullopt, ""},
      {DesignKind::dcs, rec, std::nullopt, ""},
      {DesignKind::lg, rec, std::nullopt, ""},
      {DesignKind::bh, rec, std::nullopt, ""},
      {DesignKind::pwdsmd, rec, 1.0, "pwdsmd_tau1"},
      {DesignKind::pwdsmd, rec, std::nullopt, ""},
  };
}

std::vector<AlgoPair> eight_systems() {
  std::vector<AlgoPair> out;
  for (DesignKind design : {DesignKind::random, DesignKind::dcs, DesignKind::bh,
                            DesignKind::pwdsmd})
    for (RecoveryKind rec : {RecoveryKind::omp, RecoveryKind::pdomp})
      out.push_back({design, rec, std::nullopt, ""});
  return out;
}

}  // namespace

CaseConfig default_config(CaseId id, Index scale) {
  if (scale < 1) throw ConfigError("scale factor must be >= 1");
  CaseConfig cfg;
  cfg.case_id = id;

  switch (id) {
    case CaseId::tau_sweep:
      cfg.sweep_name = "tau";
      cfg.sweep_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
      cfg.algorithms = {{DesignKind::pwdsmd, RecoveryKind::omp, std::nullopt, ""}};
      break;
    case CaseId::snr_sweep:
      cfg.sweep_name = "snr_db";
      cfg.sweep_values = {10, 15, 20, 25, 30};
      cfg.algorithms = six_designs_with(RecoveryKind::omp);
      break;
    case CaseId::sparsity_sweep:
      cfg.sweep_name = "sparsity";
      cfg.sweep_values = {8, 12, 16, 20, 24};
      cfg.algorithms = six_designs_with(RecoveryKind::omp);
      break;
    case CaseId::m_sweep:
      cfg.sweep_name = "m";
      cfg.sweep_values = {40, 50, 60, 70};
      cfg.algorithms = six_designs_with(RecoveryKind::omp);
      break;
    case CaseId::beta_sweep:
      cfg.sweep_name = "beta";
      cfg.sweep_values = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0};
      cfg.algorithms = {{DesignKind::random, RecoveryKind::pdomp, std::nullopt, ""},
                        {DesignKind::pwdsmd, RecoveryKind::pdomp, std::nullopt, ""}};
      break;
    case CaseId::system_compare:
      cfg.sweep_name = "m";
      cfg.sweep_values = {40, 50, 60, 70};
      cfg.algorithms = {{DesignKind::random, RecoveryKind::lwomp, std::nullopt, ""},
                        {DesignKind::pwdsmd, RecoveryKind::pdomp, std::nullopt, ""}};
      break;
    case CaseId::system_sparsity:
      cfg.sweep_name = "sparsity";
      cfg.sweep_values = {8, 12, 16, 20, 24};
      cfg.algorithms = eight_systems();
      break;
    case CaseId::system_m:
      cfg.sweep_name = "m";
      cfg.sweep_values = {40, 50, 60, 70};
      cfg.algorithms = eight_systems();
      break;
    case CaseId::entropy_compare:
      cfg.sweep_name = "simu";
      cfg.sweep_values = {1, 2, 3, 4};
      cfg.algorithms = {{DesignKind::pwdsmd, RecoveryKind::pdomp, std::nullopt, ""}};
      break;
  }

  if (scale > 1) {
    cfg.m = scale_dim(cfg.m, scale);
    cfg.n = scale_dim(cfg.n, scale);
    cfg.k = scale_dim(cfg.k, scale);
    cfg.sparsity = scale_dim(cfg.sparsity, scale);
    cfg.trials = scale_dim(cfg.trials, scale);
    cfg.group_sizes = apportion_groups(cfg.group_sizes, cfg.k);
    if (cfg.sweep_name == "m" || cfg.sweep_name == "sparsity")
      cfg.sweep_values = scale_values(cfg.sweep_values, scale);
  }
  return cfg;
}

namespace {

struct PointSetting {
  Index m;
  Index sparsity;
  std::optional<double> snr_db;
  double tau;
  double beta;
  std::vector<Index> group_sizes;
};

PointSetting resolve_point(const CaseConfig& cfg, double value) {
  PointSetting p{cfg.m, cfg.sparsity, cfg.snr_db, cfg.tau, cfg.beta,
                 cfg.group_sizes};
  if (cfg.sweep_name == "tau") {
    p.tau = value;
  } else if (cfg.sweep_name == "snr_db") {
    p.snr_db = value;
  } else if (cfg.sweep_name == "sparsity") {
    p.sparsity = static_cast<Index>(std::llround(value));
  } else if (cfg.sweep_name == "m") {
    p.m = static_cast<Index>(std::llround(value));
  } else if (cfg.sweep_name == "beta") {
    p.beta = value;
  } else if (cfg.sweep_name == "simu") {
    p.group_sizes = reference_groups(static_cast<int>(std::llround(value)), cfg.k);
  } else {
    throw ConfigError("unknown sweep parameter '" + cfg.sweep_name + "'");
  }
  return p;
}

GroupSpec point_group_spec(const CaseConfig& cfg, const PointSetting& p) {
  if (cfg.group_probs) return GroupSpec::from_probs(p.group_sizes, *cfg.group_probs);
  return GroupSpec::from_sparsity(p.group_sizes, p.sparsity);
}

void validate_point(const CaseConfig& cfg, const PointSetting& p) {
  if (p.m < 1 || p.m > cfg.n)
    throw ConfigError("infeasible config: need 1 <= M <= N, got M=" +
                      std::to_string(p.m));
  if (p.sparsity < 1 || p.sparsity > p.m)
    throw ConfigError("infeasible config: need 1 <= S <= M, got S=" +
                      std::to_string(p.sparsity) + " M=" + std::to_string(p.m));
  if (!(p.tau > 0.0 && p.tau <= 1.0))
    throw ConfigError("infeasible config: tau outside (0,1]");
  if (p.beta < 0.0) throw ConfigError("infeasible config: beta < 0");
  point_group_spec(cfg, p);  // throws on infeasible groups
}

void validate(const CaseConfig& cfg) {
  if (cfg.sweep_values.empty()) throw ConfigError("sweep values must be nonempty");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.algorithms.empty()) throw ConfigError("no algorithms configured");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  for (const AlgoPair& algo : cfg.algorithms)
    if (algo.tau && !(*algo.tau > 0.0 && *algo.tau <= 1.0))
      throw ConfigError("algorithm tau override outside (0,1]");
  for (double value : cfg.sweep_values) validate_point(cfg, resolve_point(cfg, value));
}

// Designs are built once per sweep point and shared across trials.
struct PreparedSystem {
  AlgoPair algo;
  SensingMatrix phi;
  EquivalentDictionary eq;
};

std::vector<PreparedSystem> prepare_systems(const CaseConfig& cfg,
                                            const Dictionary& psi,
                                            const PointSetting& p,
                                            const Matrix& phi0,
                                            std::uint64_t design_seed,
                                            const Vector& xi) {
  std::vector<PreparedSystem> systems;
  for (const AlgoPair& algo : cfg.algorithms) {
    SensingMatrix phi = [&]() -> SensingMatrix {
      switch (algo.design) {
        case DesignKind::random:
          return SensingMatrix(phi0, DesignKind::random,
                               {{"m", static_cast<double>(p.m)}});
        case DesignKind::dcs:
        case DesignKind::lg: {
          BaselineParams params;
          params.m = p.m;
          return design_baseline(algo.design, psi, params, design_seed).first;
        }
        case DesignKind::bh: {
          BaselineParams params;
          params.m = p.m;
          params.gamma = cfg.gamma;
          params.iters = cfg.bh_iters;
          params.phi0 = phi0;
          return design_baseline(DesignKind::bh, psi, params, design_seed).first;
        }
        case DesignKind::pwdsmd: {
          const double tau = algo.tau.value_or(p.tau);
          PriorProfile prior = weight_matrix(xi, tau);
          return design_pwdsmd(psi, prior, phi0).first;
        }
      }
      throw ConfigError("unknown design kind");
    }();
    EquivalentDictionary eq = equivalent_dictionary(phi, psi);
    systems.push_back({algo, std::move(phi), std::move(eq)});
  }
  return systems;
}

std::vector<Index> column_support(const Matrix& coeffs, Index col) {
  std::vector<Index> support;
  for (Index i = 0; i < coeffs.rows(); ++i)
    if (coeffs(i, col) != 0.0) support.push_back(i);
  return support;
}

double trial_er(const std::vector<Index>& truth, const std::vector<Index>& est) {
  if (truth.empty()) return std::numeric_limits<double>::quiet_NaN();
  Index hits = 0;
  for (Index i : truth)
    if (std::find(est.begin(), est.end(), i) != est.end()) ++hits;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

void run_trials(const CaseConfig& cfg, const Dictionary& psi,
                const std::vector<PreparedSystem>& systems,
                const SignalBatch& batch, const PointSetting& p,
                const Vector& xi, std::vector<PointResult>& results) {
  const Index trials = batch.l();
  const RecoveryConfig rec{p.sparsity, p.beta, cfg.g_bar, 1e-6};

  auto work = [&](Index begin, Index end) {
    for (Index t = begin; t < end; ++t) {
      const std::vector<Index> truth = column_support(batch.coefficients, t);
      for (size_t a = 0; a < systems.size(); ++a) {
        const PreparedSystem& sys = systems[a];
        const Vector y = sys.phi.entries() * batch.signals.col(t);
        RecoveryResult r = [&] {
          switch (sys.algo.recovery) {
            case RecoveryKind::omp: return omp(y, sys.eq, p.sparsity);
            case RecoveryKind::pdomp: return pdomp(y, sys.eq, xi, rec);
            case RecoveryKind::lwomp: return lw_omp(y, sys.eq, xi, rec);
          }
          throw ConfigError("unknown recovery kind");
        }();
        const Vector x_hat = psi.entries() * r.coefficients;
        results[a].mse_per_trial[static_cast<size_t>(t)] =
            (batch.signals.col(t) - x_hat).squaredNorm() /
            static_cast<double>(psi.n());
        results[a].er_per_trial[static_cast<size_t>(t)] = trial_er(truth, r.support);
      }
    }
  };

  const Index workers = std::min<Index>(cfg.workers, trials);
  if (workers <= 1) {
    work(0, trials);
    return;
  }
  std::vector<std::thread> pool;
  const Index chunk = (trials + workers - 1) / workers;
  for (Index w = 0; w < workers; ++w) {
    const Index begin = w * chunk;
    const Index end = std::min(trials, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double PointResult::mean_mse() const {
  double sum = 0.0;
  for (double v : mse_per_trial) sum += v;
  return sum / static_cast<double>(mse_per_trial.size());
}

double PointResult::se_mse() const {
  const size_t l = mse_per_trial.size();
  if (l < 2) return 0.0;
  const double mean = mean_mse();
  double ss = 0.0;
  for (double v : mse_per_trial) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(l - 1) / static_cast<double>(l));
}

double PointResult::mean_er() const {
  double sum = 0.0;
  size_t counted = 0;
  for (double v : er_per_trial)
    if (!std::isnan(v)) {
      sum += v;
      ++counted;
    }
  if (counted == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(counted);
}

std::vector<PointResult> run_point(const CaseConfig& cfg, const Dictionary& psi,
                                   Index sweep_index) {
  if (sweep_index < 0 || sweep_index >= static_cast<Index>(cfg.sweep_values.size()))
    throw ConfigError("sweep index out of range");
  const double value = cfg.sweep_values[static_cast<size_t>(sweep_index)];
  const PointSetting p = resolve_point(cfg, value);
  validate_point(cfg, p);

  const GroupSpec spec = point_group_spec(cfg, p);
  const Vector xi = expand_groups(spec);

  const std::uint64_t sweep_label = static_cast<std::uint64_t>(sweep_index);
  RngStream phi0_rng(cfg.master_seed, {stream::kPhi0, sweep_label});
  const Matrix phi0 = gen_gaussian(p.m, cfg.n, phi0_rng);
  RngStream design_rng(cfg.master_seed, {stream::kDesign, sweep_label});
  const std::uint64_t design_seed = design_rng();

  const std::vector<PreparedSystem> systems =
      prepare_systems(cfg, psi, p, phi0, design_seed, xi);

  const RngStream batch_rng(cfg.master_seed, {stream::kBatch, sweep_label});
  const SignalBatch batch =
      gen_batch(psi, spec, cfg.trials, p.snr_db, batch_rng, cfg.support_model);

  std::vector<PointResult> results;
  for (const PreparedSystem& sys : systems) {
    PointResult r;
    r.algo = sys.algo;
    r.mse_per_trial.resize(static_cast<size_t>(cfg.trials));
    r.er_per_trial.resize(static_cast<size_t>(cfg.trials));
    results.push_back(std::move(r));
  }
  run_trials(cfg, psi, systems, batch, p, xi, results);
  return results;
}

ExperimentResult run_case(const CaseConfig& cfg) {
  validate(cfg);
  RngStream dict_rng(cfg.master_seed, {stream::kDictionary});
  const Dictionary psi = gen_dictionary(cfg.n, cfg.k, dict_rng);

  ExperimentResult result;
  for (Index i = 0; i < static_cast<Index>(cfg.sweep_values.size()); ++i) {
    const std::vector<PointResult> point = run_point(cfg, psi, i);
    for (const PointResult& r : point)
      result.rows.push_back({cfg.sweep_values[static_cast<size_t>(i)],
                             r.algo.effective_label(),
                             to_string(r.algo.recovery), r.mean_mse(), r.mean_er(),
                             cfg.trials, cfg.master_seed, r.se_mse()});
  }
  return result;
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "sweep_value,design,recovery,mse,e_r,trials,seed,mse_se\n";
  for (const ResultRow& row : result.rows) {
    out << format_double(row.sweep_value) << ',' << row.design << ','
        << row.recovery << ',' << format_double(row.mse) << ','
        << format_double(row.e_r) << ',' << row.trials << ',' << row.seed << ','
        << format_double(row.mse_se) << '\n';
  }
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

std::string config_to_json(const CaseConfig& cfg) {
  json j;
  j["case_id"] = to_string(cfg.case_id);
  j["dims"] = {cfg.m, cfg.n, cfg.k};
  j["sparsity"] = cfg.sparsity;
  if (cfg.snr_db) j["snr_db"] = *cfg.snr_db;
  j["trials"] = cfg.trials;
  j["group_spec"]["group_sizes"] = cfg.group_sizes;
  if (cfg.group_probs) j["group_spec"]["group_probs"] = *cfg.group_probs;
  json algos = json::array();
  for (const AlgoPair& a : cfg.algorithms) {
    json ja;
    ja["design"] = to_string(a.design);
    ja["recovery"] = to_string(a.recovery);
    if (a.tau) ja["tau"] = *a.tau;
    if (!a.label.empty()) ja["label"] = a.label;
    algos.push_back(ja);
  }
  j["algorithms"] = algos;
  j["sweep"] = {{"name", cfg.sweep_name}, {"values", cfg.sweep_values}};
  j["master_seed"] = cfg.master_seed;
  j["tau"] = cfg.tau;
  j["beta"] = cfg.beta;
  j["gamma"] = cfg.gamma;
  j["bh_iters"] = cfg.bh_iters;
  j["g_bar"] = cfg.g_bar;
  j["support_model"] =
      cfg.support_model == SupportModel::bernoulli ? "bernoulli" : "exact_count";
  j["workers"] = cfg.workers;
  return j.dump(2);
}

CaseConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config JSON: ") + e.what());
  }
  try {
    CaseConfig cfg;
    cfg.case_id = case_id_from_string(j.at("case_id").get<std::string>());
    const auto dims = j.at("dims");
    cfg.m = dims.at(0).get<Index>();
    cfg.n = dims.at(1).get<Index>();
    cfg.k = dims.at(2).get<Index>();
    cfg.sparsity = j.at("sparsity").get<Index>();
    cfg.snr_db.reset();
    if (j.contains("snr_db") && !j["snr_db"].is_null())
      cfg.snr_db = j["snr_db"].get<double>();
    cfg.trials = j.at("trials").get<Index>();
    const auto& spec = j.at("group_spec");
    cfg.group_sizes = spec.at("group_sizes").get<std::vector<Index>>();
    if (spec.contains("group_probs"))
      cfg.group_probs = spec["group_probs"].get<std::vector<double>>();
    cfg.algorithms.clear();
    for (const auto& ja : j.at("algorithms")) {
      AlgoPair a;
      a.design = design_kind_from_string(ja.at("design").get<std::string>());
      a.recovery = recovery_kind_from_string(ja.at("recovery").get<std::string>());
      if (ja.contains("tau")) a.tau = ja["tau"].get<double>();
      if (ja.contains("label")) a.label = ja["label"].get<std::string>();
      cfg.algorithms.push_back(std::move(a));
    }
    cfg.sweep_name = j.at("sweep").at("name").get<std::string>();
    cfg.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("tau")) cfg.tau = j["tau"].get<double>();
    if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
    if (j.contains("gamma")) cfg.gamma = j["gamma"].get<double>();
    if (j.contains("bh_iters")) cfg.bh_iters = j["bh_iters"].get<Index>();
    if (j.contains("g_bar")) cfg.g_bar = j["g_bar"].get<double>();
    if (j.contains("support_model")) {
      const std::string model = j["support_model"].get<std::string>();
      if (model == "bernoulli") cfg.support_model = SupportModel::bernoulli;
      else if (model == "exact_count") cfg.support_model = SupportModel::exact_count;
      else throw ConfigError("unknown support model '" + model + "'");
    }
    if (j.contains("workers")) cfg.workers = j["workers"].get<Index>();
    return cfg;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config JSON: ") + e.what());
  }
}

CaseConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return config_from_json(text);
}

}  // namespace pwcs
