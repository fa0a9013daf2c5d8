#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "postlasso/analyze.hpp"
#include "postlasso/simulate.hpp"

namespace pl = postlasso;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string input_path;
  uint64_t seed = 1;
  int reps = 100;
  int threads = 0;
  double alpha = 0.05;
  std::string lambda_rule = "sup";
  bool fwer = false;
  // simulation shape
  std::string graph = "scale_free";
  int n = 300;
  int p = 100;
  double rho = 0.2;
  double snr = 0.3;
  double sigma_eps = 0.0;
  int qstar = 1;
  std::string beta_pattern;
  double cond_lambda_mult = pl::kConditionLambdaMult;
  double t_threshold1 = 0.999;
  double t_threshold2 = 1.0;
};

// Tracks which keys were supplied where; precedence is CLI > file > default.
class ConfigSource {
 public:
  ConfigSource(const CLI::App* cmd, const std::string& config_path) : cmd_(cmd) {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) {
      pl::fail(pl::ErrorKind::ConfigInvalid,
               "cannot open config '" + config_path + "'");
    }
    try {
      in >> file_;
    } catch (const json::exception& e) {
      pl::fail(pl::ErrorKind::ConfigInvalid,
               "config is not valid JSON: " + std::string(e.what()));
    }
    if (!file_.is_object()) {
      pl::fail(pl::ErrorKind::ConfigInvalid, "config must be a JSON object");
    }
  }

  bool cli_given(const std::string& flag) const {
    const CLI::Option* opt = cmd_->get_option_no_throw("--" + flag);
    return opt != nullptr && opt->count() > 0;
  }

  template <typename T>
  void apply(const std::string& key, T& value) const {
    if (cli_given(key)) return;  // CLI already wrote into value
    const auto it = file_.find(key);
    if (it == file_.end()) return;
    try {
      value = it->get<T>();
    } catch (const json::exception&) {
      pl::fail(pl::ErrorKind::ConfigInvalid,
               "config field '" + key + "' has the wrong type");
    }
  }

  bool has(const std::string& key) const {
    return cli_given(key) || file_.contains(key);
  }

 private:
  const CLI::App* cmd_;
  json file_;
};

void require(const ConfigSource& source, const std::string& key) {
  if (!source.has(key)) {
    pl::fail(pl::ErrorKind::ConfigInvalid,
             "missing required field '" + key + "'");
  }
}

pl::GraphKind parse_graph(const std::string& name) {
  if (name == "scale_free") return pl::GraphKind::ScaleFree;
  if (name == "erdos_renyi") return pl::GraphKind::ErdosRenyi;
  if (name == "stochastic_block") return pl::GraphKind::StochasticBlock;
  pl::fail(pl::ErrorKind::ConfigInvalid,
           "graph must be scale_free, erdos_renyi or stochastic_block");
}

pl::ExperimentSpec build_spec(const CommonArgs& args,
                              pl::ExperimentKind kind) {
  pl::ExperimentSpec spec;
  spec.graph.p = args.p;
  spec.replicates = args.reps;
  spec.alpha = args.alpha;
  spec.seed = args.seed;
  spec.threads = args.threads;
  spec.qstar = args.qstar;
  if (kind == pl::ExperimentKind::Conditions) {
    // Wishart-sampled correlations; no graph or coefficient pattern.
    if (args.qstar < 1 || args.qstar > args.p) {
      pl::fail(pl::ErrorKind::ConfigInvalid, "qstar must be in [1, p]");
    }
    spec.cond_lambda_mult = args.cond_lambda_mult;
    spec.cond_threshold1 = args.t_threshold1;
    spec.cond_threshold2 = args.t_threshold2;
    return spec;
  }
  spec.graph.kind = parse_graph(args.graph);
  if (spec.graph.kind == pl::GraphKind::ScaleFree) {
    spec.graph.edge_density = 0.05;
    // Signal nodes sit on fixed degree ranks: every 10th least-connected
    // node at the reference p = 100, every 30th at p = 500. The step
    // scales with p and is clamped so the ranks stay feasible.
    if (kind == pl::ExperimentKind::Coverage) {
      spec.graph.signal_count = 5;
      spec.graph.rank_step = std::max(1, args.p / 10);
    } else {
      spec.graph.signal_count = 10;
      spec.graph.rank_step = std::max(1, 3 * args.p / 50);
    }
    spec.graph.rank_step =
        std::min(spec.graph.rank_step, args.p / spec.graph.signal_count);
    spec.graph.rank_step = std::max(spec.graph.rank_step, 1);
    if (spec.graph.signal_count > args.p) {
      pl::fail(pl::ErrorKind::ConfigInvalid, "p too small for the pattern");
    }
  } else if (spec.graph.kind == pl::GraphKind::StochasticBlock) {
    spec.graph.block1 = kind == pl::ExperimentKind::Coverage ? 5 : 10;
    spec.graph.intra_density = 0.3;
    spec.graph.inter_density = 0.05;
  }
  spec.rho = args.rho;
  spec.n = args.n;
  spec.snr = args.snr;
  spec.sigma_eps = args.sigma_eps;
  std::string pattern = args.beta_pattern;
  if (pattern.empty()) {
    pattern = kind == pl::ExperimentKind::Coverage ? "coverage" : "power";
  }
  spec.beta_star = pl::beta_pattern(pattern, args.p);
  double fixed = 0.0;
  spec.lambda_rule = pl::lambda_rule_from_name(args.lambda_rule, &fixed);
  spec.fixed_lambda = fixed;
  return spec;
}

json spec_to_json(const CommonArgs& args, const std::string& command) {
  json j;
  j["command"] = command;
  j["graph"] = args.graph;
  j["n"] = args.n;
  j["p"] = args.p;
  j["rho"] = args.rho;
  j["snr"] = args.snr;
  j["sigma_eps"] = args.sigma_eps;
  j["qstar"] = args.qstar;
  j["lambda_rule"] = args.lambda_rule;
  j["replicates"] = args.reps;
  j["alpha"] = args.alpha;
  j["seed"] = args.seed;
  j["threads"] = args.threads;
  j["fwer"] = args.fwer;
  if (!args.beta_pattern.empty()) j["beta_pattern"] = args.beta_pattern;
  if (!args.input_path.empty()) j["in"] = args.input_path;
  j["out"] = args.out_path;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) pl::fail(pl::ErrorKind::IoError, "cannot write '" + path + "'");
  out << content;
  if (!out) pl::fail(pl::ErrorKind::IoError, "write failed for '" + path + "'");
}

// The sidecar holds the effective flat config at top level, so it can be
// fed straight back through --config to reproduce the run. Timestamps stay
// here so result CSVs rerun byte-identically.
void write_sidecar(const std::string& out_path, const json& config,
                   double wall_seconds) {
  json meta = config;
  meta["meta"] = {
      {"version", kVersion},
      {"wall_time_s", wall_seconds},
      {"timestamp_unix",
       std::chrono::duration_cast<std::chrono::seconds>(
           std::chrono::system_clock::now().time_since_epoch())
           .count()},
  };
  write_file(out_path + ".meta.json", meta.dump(2) + "\n");
}

void apply_common(const ConfigSource& cfg, CommonArgs& args) {
  cfg.apply("seed", args.seed);
  cfg.apply("reps", args.reps);
  cfg.apply("replicates", args.reps);
  cfg.apply("threads", args.threads);
  cfg.apply("alpha", args.alpha);
  cfg.apply("lambda_rule", args.lambda_rule);
  cfg.apply("fwer", args.fwer);
  cfg.apply("graph", args.graph);
  cfg.apply("n", args.n);
  cfg.apply("p", args.p);
  cfg.apply("rho", args.rho);
  cfg.apply("snr", args.snr);
  cfg.apply("sigma_eps", args.sigma_eps);
  cfg.apply("qstar", args.qstar);
  cfg.apply("cond_lambda_mult", args.cond_lambda_mult);
  cfg.apply("t_threshold1", args.t_threshold1);
  cfg.apply("t_threshold2", args.t_threshold2);
  cfg.apply("beta_pattern", args.beta_pattern);
  cfg.apply("out", args.out_path);
  cfg.apply("in", args.input_path);
}

int run_simulation(const CLI::App* cmd, CommonArgs& args,
                   pl::ExperimentKind kind, const std::string& command) {
  const ConfigSource cfg(cmd, args.config_path);
  apply_common(cfg, args);
  require(cfg, "out");
  if (kind != pl::ExperimentKind::Conditions) {
    require(cfg, "snr");
    require(cfg, "n");
    require(cfg, "p");
  } else {
    require(cfg, "p");
    require(cfg, "qstar");
  }
  if (!(args.alpha > 0.0 && args.alpha < 1.0)) {
    pl::fail(pl::ErrorKind::ConfigInvalid, "alpha must be in (0, 1)");
  }
  const pl::ExperimentSpec spec = build_spec(args, kind);
  const auto start = std::chrono::steady_clock::now();
  const pl::MetricsReport report = pl::run_experiment(spec, kind);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_file(args.out_path, pl::metrics_csv(kind, {report}));
  json config = spec_to_json(args, command);
  if (report.pd_inflated) config["result"]["pd_inflated"] = true;
  if (report.not_converged > 0) {
    config["result"]["not_converged"] = report.not_converged;
  }
  write_sidecar(args.out_path, config, wall);
  return 0;
}

int run_analyze(const CLI::App* cmd, CommonArgs& args, bool fit_mode) {
  const ConfigSource cfg(cmd, args.config_path);
  apply_common(cfg, args);
  require(cfg, "in");
  require(cfg, "out");
  if (!(args.alpha > 0.0 && args.alpha < 1.0)) {
    pl::fail(pl::ErrorKind::ConfigInvalid, "alpha must be in (0, 1)");
  }
  pl::AnalyzeOptions options;
  double fixed = 0.0;
  options.lambda_rule = pl::lambda_rule_from_name(args.lambda_rule, &fixed);
  options.fixed_lambda = fixed;
  options.alpha = args.alpha;
  options.fwer = args.fwer;
  options.seed = args.seed;

  const auto start = std::chrono::steady_clock::now();
  const pl::Dataset data = pl::read_dataset_csv(args.input_path);
  std::string csv;
  json extra;
  if (fit_mode) {
    const pl::FitOutput out = pl::fit_dataset(data, options);
    csv = pl::fit_csv(out);
    extra["lambda"] = out.lambda;
    extra["sigma"] = out.sigma;
  } else {
    const pl::AnalyzeOutput out = pl::analyze_dataset(data, options);
    csv = pl::analyze_csv(out);
    extra["lambda"] = out.lambda;
    extra["sigma"] = out.sigma;
    extra["selected"] = out.active.indices();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_file(args.out_path, csv);
  json config = spec_to_json(args, fit_mode ? "fit" : "analyze");
  config["result"] = extra;
  write_sidecar(args.out_path, config, wall);
  return 0;
}

void add_common_flags(CLI::App* cmd, CommonArgs& args, bool simulation) {
  cmd->add_option("--config", args.config_path, "flat JSON config file");
  cmd->add_option("--seed", args.seed, "master RNG seed");
  cmd->add_option("--out", args.out_path, "output CSV path");
  cmd->add_option("--alpha", args.alpha, "significance / CI level parameter");
  cmd->add_option("--lambda-rule,--lambda_rule", args.lambda_rule,
                  "1se, sup, min or fixed:VALUE");
  cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
  if (simulation) {
    cmd->add_option("--reps", args.reps, "Monte Carlo replicates");
    cmd->add_option("--graph", args.graph,
                    "scale_free, erdos_renyi or stochastic_block");
    cmd->add_option("--n", args.n, "sample size");
    cmd->add_option("--p", args.p, "number of variables");
    cmd->add_option("--rho", args.rho, "adjacency edge weight");
    cmd->add_option("--snr", args.snr, "signal-to-noise ratio");
    cmd->add_option("--sigma-eps,--sigma_eps", args.sigma_eps,
                    "error sd override (required when beta* = 0)");
    cmd->add_option("--beta-pattern,--beta_pattern", args.beta_pattern,
                    "coverage, power or null");
    cmd->add_option("--qstar", args.qstar, "signal count (audit-conditions)");
    cmd->add_option("--cond-lambda-mult", args.cond_lambda_mult,
                    "noiseless-lasso lambda as a multiple of sqrt(log(p)/n)");
    cmd->add_option("--t-threshold1", args.t_threshold1,
                    "part-1 subgradient bound");
    cmd->add_option("--t-threshold2", args.t_threshold2,
                    "part-2 ratio bound");
  } else {
    cmd->add_option("--in", args.input_path, "input dataset CSV");
    cmd->add_flag("--fwer", args.fwer, "Holm FWER control at level alpha");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step lasso + OLS inference toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonArgs cov_args, pow_args, cond_args, ana_args, fit_args;
  cov_args.lambda_rule = "sup";
  pow_args.lambda_rule = "1se";
  pow_args.n = 200;
  pow_args.p = 500;
  cond_args.p = 64;
  ana_args.alpha = 0.1;
  ana_args.lambda_rule = "1se";
  fit_args.alpha = 0.05;
  fit_args.lambda_rule = "1se";

  CLI::App* cov = app.add_subcommand(
      "simulate-coverage", "coverage/length/determinism of naive intervals");
  add_common_flags(cov, cov_args, true);
  CLI::App* pow = app.add_subcommand(
      "simulate-power", "score-test power and type-I error");
  add_common_flags(pow, pow_args, true);
  CLI::App* cond = app.add_subcommand(
      "audit-conditions", "selection-stability condition probabilities");
  add_common_flags(cond, cond_args, true);
  CLI::App* ana = app.add_subcommand(
      "analyze", "score-test every variable of a dataset CSV");
  add_common_flags(ana, ana_args, false);
  CLI::App* fit = app.add_subcommand(
      "fit", "lasso selection + OLS intervals on a dataset CSV");
  add_common_flags(fit, fit_args, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cov->parsed()) {
      return run_simulation(cov, cov_args, pl::ExperimentKind::Coverage,
                            "simulate-coverage");
    }
    if (pow->parsed()) {
      return run_simulation(pow, pow_args, pl::ExperimentKind::Power,
                            "simulate-power");
    }
    if (cond->parsed()) {
      return run_simulation(cond, cond_args, pl::ExperimentKind::Conditions,
                            "audit-conditions");
    }
    if (ana->parsed()) return run_analyze(ana, ana_args, false);
    if (fit->parsed()) return run_analyze(fit, fit_args, true);
  } catch (const pl::Error& e) {
    std::cerr << "postlasso: " << e.what() << "\n";
    return pl::error_exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "postlasso: internal: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
