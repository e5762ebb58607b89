#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "pwcs/design.hpp"
#include "pwcs/experiments.hpp"
#include "pwcs/matrix_io.hpp"
#include "pwcs/metrics.hpp"
#include "pwcs/prior.hpp"
#include "pwcs/recovery.hpp"
#include "pwcs/synthetic.hpp"

namespace {

using namespace pwcs;
using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct DesignArgs {
  std::string algo;
  std::string dict;
  Index m = 0;
  std::string prior;
  double tau = 0.2;
  double gamma = 0.5;
  Index iters = 100;
  std::uint64_t seed = 0;
  std::string out;
};

void run_design(const DesignArgs& a) {
  const Dictionary psi = Dictionary::normalized(load_matrix(a.dict));
  const DesignKind kind = design_kind_from_string(a.algo);

  SensingMatrix phi(Matrix::Identity(1, 1), DesignKind::random);
  DesignReport report;
  if (kind == DesignKind::pwdsmd) {
    if (a.prior.empty())
      throw ConfigError("--algo pwdsmd requires --prior <file>");
    const Vector xi = load_vector(a.prior);
    const PriorProfile profile = weight_matrix(xi, a.tau);
    std::tie(phi, report) = design_pwdsmd(psi, profile, a.m, a.seed);
  } else {
    BaselineParams params;
    params.m = a.m;
    params.gamma = a.gamma;
    params.iters = a.iters;
    std::tie(phi, report) = design_baseline(kind, psi, params, a.seed);
  }

  store_matrix(phi.entries(), a.out);
  json sidecar;
  sidecar["design"] = to_string(kind);
  sidecar["objective"] = report.objective;
  sidecar["trailing_spectrum_sum"] = report.trailing_spectrum_sum;
  sidecar["iterations"] = report.iterations;
  sidecar["theta2_source"] = report.theta2_source;
  write_text(a.out + ".json", sidecar.dump(2) + "\n");
  std::cout << format_double(report.objective) << "\n";
}

struct RecoverArgs {
  std::string algo;
  std::string phi;
  std::string dict;
  std::string y;
  std::string prior;
  double beta = 1e-4;
  double gbar = 0.7978845608028654;
  Index sparsity = 0;
  std::string out;
  std::string out_signals;
};

void run_recover(const RecoverArgs& a) {
  const Dictionary psi = Dictionary::normalized(load_matrix(a.dict));
  const Matrix phi = load_matrix(a.phi);
  if (phi.cols() != psi.n())
    throw ContractError("sensing matrix width does not match dictionary");
  const Matrix ys = load_matrix(a.y);
  if (ys.rows() != phi.rows())
    throw ContractError("observation height does not match sensing matrix");

  const bool needs_prior = a.algo == "pdomp" || a.algo == "lwomp";
  if (needs_prior && a.prior.empty())
    throw ConfigError("--algo " + a.algo + " requires --prior <file>");
  Vector xi;
  if (needs_prior) xi = load_vector(a.prior);

  const EquivalentDictionary eq =
      EquivalentDictionary::from_raw(phi * psi.entries());
  RecoveryConfig cfg{a.sparsity, a.beta, a.gbar, 1e-6};

  Matrix alpha(psi.k(), ys.cols());
  double max_residual = 0.0;
  for (Index l = 0; l < ys.cols(); ++l) {
    const Vector y = ys.col(l);
    RecoveryResult r;
    if (a.algo == "omp") r = omp(y, eq, a.sparsity);
    else if (a.algo == "pdomp") r = pdomp(y, eq, xi, cfg);
    else if (a.algo == "lwomp") r = lw_omp(y, eq, xi, cfg);
    else throw ConfigError("unknown recovery algorithm '" + a.algo + "'");
    alpha.col(l) = r.coefficients;
    max_residual = std::max(max_residual, (y - eq.raw * r.coefficients).norm());
  }

  store_matrix(alpha, a.out);
  if (!a.out_signals.empty()) store_matrix(psi.entries() * alpha, a.out_signals);
  std::cout << "residual " << format_double(max_residual) << "\n";
}

struct SynthArgs {
  Index n = 0, k = 0;
  std::string out_dict;
  std::string dict;
  std::string groups;
  Index l = 0;
  std::optional<double> snr;
  bool exact = false;
  std::uint64_t seed = 0;
  std::string out_coeffs;
  std::string out_signals;
  std::string out_noise;
};

void run_synth(const SynthArgs& a) {
  std::optional<Dictionary> psi;
  if (!a.out_dict.empty()) {
    if (a.n < 1 || a.k < 1)
      throw ConfigError("--out-dict requires --n and --k");
    psi = gen_dictionary(a.n, a.k, a.seed);
    store_matrix(psi->entries(), a.out_dict);
  }
  const bool wants_batch = !a.out_signals.empty() || !a.out_coeffs.empty();
  if (!wants_batch) {
    if (!psi) throw ConfigError("nothing to do: pass --out-dict and/or batch outputs");
    return;
  }
  if (!a.dict.empty()) psi = Dictionary::normalized(load_matrix(a.dict));
  if (!psi) throw ConfigError("batch generation requires --dict or --out-dict");
  if (a.groups.empty() || a.l < 1)
    throw ConfigError("batch generation requires --groups <json> and --l");
  const GroupSpec spec = group_spec_from_json(read_text(a.groups));
  const RngStream rng(a.seed, {stream::kBatch});
  const SignalBatch batch =
      gen_batch(*psi, spec, a.l, a.snr, rng,
                a.exact ? SupportModel::exact_count : SupportModel::bernoulli);
  if (!a.out_coeffs.empty()) store_matrix(batch.coefficients, a.out_coeffs);
  if (!a.out_signals.empty()) store_matrix(batch.signals, a.out_signals);
  if (!a.out_noise.empty()) store_matrix(batch.noise, a.out_noise);
}

struct ExperimentArgs {
  std::string case_ref;
  std::uint64_t seed = 0;
  Index scale = 1;
  Index workers = 1;
  std::optional<Index> trials;
  std::string out;
};

void run_experiment(const ExperimentArgs& a) {
  CaseConfig cfg = [&] {
    try {
      return default_config(case_id_from_string(a.case_ref), a.scale);
    } catch (const ConfigError&) {
      if (!std::filesystem::exists(a.case_ref)) throw;
      return load_config(a.case_ref);
    }
  }();
  cfg.master_seed = a.seed;
  cfg.workers = a.workers;
  if (a.trials) cfg.trials = *a.trials;
  const ExperimentResult result = run_case(cfg);
  emit_csv(result, a.out);
}

struct MetricsArgs {
  std::string x;
  std::string xhat;
  std::string coherence;
};

void run_metrics(const MetricsArgs& a) {
  json out;
  if (!a.coherence.empty()) {
    const Matrix d = load_matrix(a.coherence);
    out["mu"] = mutual_coherence(d);
    out["welch_bound"] = welch_bound(d.rows(), d.cols());
  }
  if (!a.x.empty() || !a.xhat.empty()) {
    if (a.x.empty() || a.xhat.empty())
      throw ConfigError("--x and --xhat must be given together");
    const double value = mse(load_matrix(a.x), load_matrix(a.xhat));
    out["mse"] = value;
    out["psnr_db"] = psnr(value);
  }
  if (out.empty())
    throw ConfigError("nothing to do: pass --coherence or --x/--xhat");
  std::cout << out.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensing-matrix design and sparse recovery toolkit"};
  app.require_subcommand(1);

  DesignArgs design_args;
  auto* design = app.add_subcommand("design", "Design a sensing matrix");
  design->add_option("--algo", design_args.algo, "random|dcs|lg|bh|pwdsmd")
      ->required();
  design->add_option("--dict", design_args.dict, "dictionary matrix file")
      ->required();
  design->add_option("--m", design_args.m, "measurement dimension")->required();
  design->add_option("--prior", design_args.prior, "utilization probabilities file");
  design->add_option("--tau", design_args.tau, "weight offset in (0,1]");
  design->add_option("--gamma", design_args.gamma, "bh trade-off in [0,1]");
  design->add_option("--iters", design_args.iters, "bh iteration count");
  design->add_option("--seed", design_args.seed, "64-bit seed")->required();
  design->add_option("--out", design_args.out, "output matrix file")->required();
  design->callback([&] { run_design(design_args); });

  RecoverArgs recover_args;
  auto* recover = app.add_subcommand("recover", "Recover sparse coefficients");
  recover->add_option("--algo", recover_args.algo, "omp|pdomp|lwomp")->required();
  recover->add_option("--phi", recover_args.phi, "sensing matrix file")->required();
  recover->add_option("--dict", recover_args.dict, "dictionary matrix file")
      ->required();
  recover->add_option("--y", recover_args.y, "observations file (M x L)")
      ->required();
  recover->add_option("--prior", recover_args.prior, "utilization probabilities file");
  recover->add_option("--beta", recover_args.beta, "pdomp penalty slope");
  recover->add_option("--gbar", recover_args.gbar, "lwomp mean nonzero magnitude");
  recover->add_option("--sparsity", recover_args.sparsity, "selections per column")
      ->required();
  recover->add_option("--out", recover_args.out, "coefficients output file")
      ->required();
  recover->add_option("--out-signals", recover_args.out_signals,
                      "reconstructed signals output file");
  recover->callback([&] { run_recover(recover_args); });

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate synthetic data");
  synth->add_option("--n", synth_args.n, "signal dimension");
  synth->add_option("--k", synth_args.k, "atom count");
  synth->add_option("--out-dict", synth_args.out_dict, "dictionary output file");
  synth->add_option("--dict", synth_args.dict, "existing dictionary file");
  synth->add_option("--groups", synth_args.groups, "group spec JSON file");
  synth->add_option("--l", synth_args.l, "number of columns");
  double snr_value = 0.0;
  auto* snr_opt = synth->add_option("--snr", snr_value, "per-column SNR in dB");
  synth->add_flag("--exact", synth_args.exact, "fixed nonzero count per group");
  synth->add_option("--seed", synth_args.seed, "64-bit seed")->required();
  synth->add_option("--out-coeffs", synth_args.out_coeffs, "coefficients output");
  synth->add_option("--out-signals", synth_args.out_signals, "signals output");
  synth->add_option("--out-noise", synth_args.out_noise, "noise output");
  synth->callback([&] {
    if (snr_opt->count() > 0) synth_args.snr = snr_value;
    run_synth(synth_args);
  });

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Run a simulation case");
  experiment->add_option("--case", exp_args.case_ref, "case id or config JSON path")
      ->required();
  experiment->add_option("--seed", exp_args.seed, "64-bit master seed")->required();
  experiment->add_option("--scale", exp_args.scale, "desk-scale divisor (>=1)");
  experiment->add_option("--workers", exp_args.workers, "worker threads");
  Index trials_value = 0;
  auto* trials_opt =
      experiment->add_option("--trials", trials_value, "override trial count");
  experiment->add_option("--out", exp_args.out, "output CSV path")->required();
  experiment->callback([&] {
    if (trials_opt->count() > 0) exp_args.trials = trials_value;
    run_experiment(exp_args);
  });

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand("metrics", "Evaluate recovery metrics");
  metrics->add_option("--x", metrics_args.x, "reference matrix file");
  metrics->add_option("--xhat", metrics_args.xhat, "estimate matrix file");
  metrics->add_option("--coherence", metrics_args.coherence,
                      "matrix file for mutual coherence");
  metrics->callback([&] { run_metrics(metrics_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
