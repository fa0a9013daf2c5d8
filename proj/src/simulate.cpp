#include "postlasso/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "postlasso/conditions.hpp"
#include "postlasso/inference.hpp"
#include "postlasso/linalg.hpp"
#include "postlasso/model.hpp"
#include "postlasso/tuning.hpp"
#include "postlasso/variance.hpp"

namespace postlasso {

const char* lambda_rule_name(LambdaRule rule) {
  switch (rule) {
    case LambdaRule::OneSe: return "1se";
    case LambdaRule::Sup: return "sup";
    case LambdaRule::Min: return "min";
    case LambdaRule::Fixed: return "fixed";
  }
  return "unknown";
}

LambdaRule lambda_rule_from_name(const std::string& name,
                                 double* fixed_value) {
  if (name == "1se") return LambdaRule::OneSe;
  if (name == "sup") return LambdaRule::Sup;
  if (name == "min") return LambdaRule::Min;
  if (name.rfind("fixed:", 0) == 0) {
    try {
      *fixed_value = std::stod(name.substr(6));
    } catch (const std::exception&) {
      fail(ErrorKind::ConfigInvalid, "bad fixed lambda in '" + name + "'");
    }
    if (!(*fixed_value > 0.0)) {
      fail(ErrorKind::ConfigInvalid, "fixed lambda must be positive");
    }
    return LambdaRule::Fixed;
  }
  fail(ErrorKind::ConfigInvalid,
       "lambda rule must be one of 1se, sup, min, fixed:VALUE (got '" + name +
           "')");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Vector beta_pattern(const std::string& name, int p) {
  Vector beta = Vector::Zero(p);
  if (name == "coverage") {
    if (p < 5) fail(ErrorKind::ConfigInvalid, "coverage pattern needs p >= 5");
    beta[0] = 1.0;
    for (int j = 1; j < 5; ++j) beta[j] = 0.1;
  } else if (name == "power") {
    if (p < 10) fail(ErrorKind::ConfigInvalid, "power pattern needs p >= 10");
    for (int j = 0; j < 3; ++j) beta[j] = 1.0;
    for (int j = 3; j < 10; ++j) beta[j] = 0.1;
  } else if (name != "null") {
    fail(ErrorKind::ConfigInvalid,
         "beta pattern must be coverage, power or null (got '" + name + "')");
  }
  return beta;
}

SampledDesign sample_design(const Matrix& chol_lower, int n, Rng& rng) {
  const int p = static_cast<int>(chol_lower.rows());
  Matrix z(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z(i, j) = rng.next_normal();
  }
  Matrix raw = z * chol_lower.transpose();
  Matrix x = raw;
  for (int j = 0; j < p; ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    const double scale = std::sqrt(x.col(j).squaredNorm() / double(n));
    if (!(scale > 0.0)) {
      fail(ErrorKind::ConstantColumn, "degenerate sampled column");
    }
    x.col(j) /= scale;
  }
  return SampledDesign{DesignMatrix::checked(std::move(x)), std::move(raw)};
}

SampledDesign sample_design(const CovarianceModel& model, int n,
                            uint64_t seed) {
  const auto llt = spd_factor(model.sigma, ErrorKind::NotPositiveDefinite,
                              "Sigma is not PD");
  Rng rng(seed);
  const Matrix chol = llt.matrixL();
  return sample_design(chol, n, rng);
}

double sigma_eps_from_snr(const CovarianceModel& model,
                          const CoefficientVector& beta_star, double snr) {
  if (!(snr > 0.0)) fail(ErrorKind::OutOfDomain, "snr must be positive");
  const double quad = beta_star.beta.dot(model.sigma * beta_star.beta);
  if (!(quad > 0.0)) {
    fail(ErrorKind::ZeroSignal, "beta*^T Sigma beta* must be positive");
  }
  return std::sqrt(quad / snr);
}

namespace {

// DesignMatrix has no default constructor; the placeholder passes the
// invariant checks and is always overwritten.
Matrix placeholder_design() {
  Matrix m(2, 1);
  m << 1.0, -1.0;
  return m;
}

struct SimContext {
  const ExperimentSpec& spec;
  ExperimentKind kind;
  Matrix chol_lower;   // of Sigma (coverage/power)
  double sigma_eps = 0.0;
  int p = 0;
};

double select_lambda(const ExperimentSpec& spec, const DesignMatrix& design,
                     const Response& y, double sigma_hat, uint64_t rep_seed) {
  switch (spec.lambda_rule) {
    case LambdaRule::Sup:
      return lambda_sup(design, sigma_hat, 1000, rep_seed);
    case LambdaRule::Fixed:
      return spec.fixed_lambda;
    case LambdaRule::OneSe:
    case LambdaRule::Min: {
      const auto grid = lambda_grid(design, y, 100, 1e-3);
      const CvResult cv = cross_validate(design, y, 10, grid, rep_seed);
      return spec.lambda_rule == LambdaRule::OneSe ? cv.lambda_1se
                                                   : cv.lambda_min;
    }
  }
  fail(ErrorKind::ConfigInvalid, "unknown lambda rule");
}

ReplicateOutcome run_replicate(const SimContext& ctx, int b) {
  ReplicateOutcome out;
  const ExperimentSpec& spec = ctx.spec;
  const uint64_t rep_seed =
      Rng::derive(spec.seed, stream::kReplicate + static_cast<uint64_t>(b));

  if (ctx.kind == ExperimentKind::Conditions) {
    const int p = spec.graph.p;
    CovarianceModel model = [&] {
      for (uint64_t attempt = 0; attempt < 100; ++attempt) {
        try {
          return sample_wishart_correlation(p, rep_seed + attempt);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
        }
      }
      fail(ErrorKind::NotPositiveDefinite, "Wishart resampling exhausted");
    }();
    const auto llt = spd_factor(model.sigma, ErrorKind::NotPositiveDefinite,
                                "Wishart correlation not PD");
    Rng rng = Rng::substream(rep_seed, stream::kDesign);
    const Matrix chol = llt.matrixL();
    const SampledDesign sampled = sample_design(chol, spec.cond_n, rng);
    Vector beta = Vector::Zero(p);
    for (int j = 0; j < spec.qstar; ++j) beta[j] = 1.0;
    const CoefficientVector beta_star = CoefficientVector::from(beta);
    // All signals share one magnitude, so S* = A* by construction.
    const SelectedSet a_star = beta_star.support;
    const double lambda =
        spec.cond_lambda_mult * std::sqrt(std::log(double(p)) / spec.cond_n);
    const ConditionReport report =
        condition_t_check(sampled.design, beta_star, lambda,
                          spec.cond_threshold1, spec.cond_threshold2, a_star);
    out.converged = report.noiseless_converged;
    out.t1 = report.t_part1_holds;
    out.t2 = report.t_part2_holds;
    out.irrep =
        irrepresentable_check(sampled.design, a_star, Vector::Ones(spec.qstar))
            .second;
    return out;
  }

  Rng rng = Rng::substream(rep_seed, stream::kDesign);
  const SampledDesign sampled = sample_design(ctx.chol_lower, spec.n, rng);
  const DesignMatrix& design = sampled.design;
  Vector y_raw = design.x() * spec.beta_star;
  for (int i = 0; i < spec.n; ++i) {
    y_raw[i] += ctx.sigma_eps * rng.next_normal();
  }
  const Response y{y_raw.array() - y_raw.mean()};

  const SigmaEstimate sigma_hat = scaled_lasso_sigma(design, y);
  const double lambda = select_lambda(spec, design, y, sigma_hat.sigma,
                                      rep_seed);
  const LassoFit fit = fit_lasso(design, y, lambda);
  out.converged = fit.converged;
  const SelectedSet& active = fit.active_set;

  if (ctx.kind == ExperimentKind::Coverage) {
    if (active.empty()) {
      out.empty = true;
      return out;
    }
    out.active = active.indices();
    const OlsFit ols = ols_fit(design, y, active);
    const auto cis = naive_ci(ols, sigma_hat, 1.0 - spec.alpha);
    const CoefficientVector beta_star =
        CoefficientVector::from(spec.beta_star);
    const SubmodelTarget target = submodel_target(design, beta_star, active);
    out.pairs = active.q();
    for (int i = 0; i < active.q(); ++i) {
      const auto& ci = cis[static_cast<size_t>(i)];
      if (target.beta_m[i] >= ci.lower && target.beta_m[i] <= ci.upper) {
        ++out.covered;
      }
      out.length_sum += ci.upper - ci.lower;
    }
    return out;
  }

  // Power: score tests for every variable, bucketed by signal class.
  for (int j = 0; j < ctx.p; ++j) {
    const ScoreTestResult r =
        naive_score_test(design, y, active, j, sigma_hat);
    const bool rejected = r.p_value < spec.alpha;
    const double coef = spec.beta_star[j];
    if (coef == 0.0) {
      ++out.null_n;
      out.null_rej += rejected;
    } else if (std::abs(coef) > 0.5) {
      ++out.strong_n;
      out.strong_rej += rejected;
    } else {
      ++out.weak_n;
      out.weak_rej += rejected;
    }
  }
  return out;
}

int resolve_threads(int threads) {
#ifdef _OPENMP
  return threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

MetricsReport run(const ExperimentSpec& spec, ExperimentKind kind,
                  bool parallel) {
  if (spec.replicates < 1) {
    fail(ErrorKind::ConfigInvalid, "replicates must be >= 1");
  }
  SimContext ctx{spec, kind, placeholder_design(), 0.0, spec.graph.p};
  bool pd_inflated = false;

  if (kind != ExperimentKind::Conditions) {
    if (spec.beta_star.size() != spec.graph.p) {
      fail(ErrorKind::ConfigInvalid, "beta* length must equal p");
    }
    // Sigma and beta* are frozen once per experiment; only X and y vary
    // across replicates. Non-PD adjacency regenerates the graph; when the
    // regime is structurally non-PD (dense graphs, large rho exceed the
    // spectral bound for every draw), fall back to the inflated precision
    // construction on the first graph draw.
    std::optional<CovarianceModel> model;
    for (uint64_t attempt = 0; attempt < 100 && !model; ++attempt) {
      const EdgeList edges =
          generate_graph(spec.graph, spec.seed + attempt);
      try {
        model = covariance_from_graph(edges, spec.graph.p, spec.rho);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotPositiveDefinite) throw;
      }
    }
    if (!model) {
      model = covariance_from_graph_inflated(
          generate_graph(spec.graph, spec.seed), spec.graph.p, spec.rho);
      pd_inflated = true;
    }
    const auto llt = spd_factor(model->sigma, ErrorKind::NotPositiveDefinite,
                                "Sigma is not PD");
    ctx.chol_lower = llt.matrixL();
    const CoefficientVector beta_star = CoefficientVector::from(spec.beta_star);
    if (spec.sigma_eps > 0.0) {
      ctx.sigma_eps = spec.sigma_eps;
    } else if (beta_star.support.empty()) {
      ctx.sigma_eps = 1.0;  // null model: SNR is undefined
    } else {
      ctx.sigma_eps = sigma_eps_from_snr(*model, beta_star, spec.snr);
    }
  }

  const int b_total = spec.replicates;
  std::vector<ReplicateOutcome> outcomes(static_cast<size_t>(b_total));
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) \
    num_threads(resolve_threads(spec.threads))
#endif
    for (int b = 0; b < b_total; ++b) {
      try {
        outcomes[static_cast<size_t>(b)] = run_replicate(ctx, b);
      } catch (const std::exception&) {
        outcomes[static_cast<size_t>(b)].failed = true;
      }
    }
  } else {
    for (int b = 0; b < b_total; ++b) {
      try {
        outcomes[static_cast<size_t>(b)] = run_replicate(ctx, b);
      } catch (const std::exception&) {
        outcomes[static_cast<size_t>(b)].failed = true;
      }
    }
  }
  MetricsReport report = aggregate_outcomes(spec, kind, outcomes,
                                             spec.graph.p);
  report.pd_inflated = pd_inflated;
  return report;
}

const char* graph_kind_name(const ExperimentSpec& spec, ExperimentKind kind) {
  if (kind == ExperimentKind::Conditions) return "wishart";
  switch (spec.graph.kind) {
    case GraphKind::ScaleFree: return "scale_free";
    case GraphKind::ErdosRenyi: return "erdos_renyi";
    case GraphKind::StochasticBlock: return "stochastic_block";
  }
  return "unknown";
}

}  // namespace

MetricsReport aggregate_outcomes(const ExperimentSpec& spec,
                                 ExperimentKind kind,
                                 const std::vector<ReplicateOutcome>& outcomes,
                                 int p) {
  MetricsReport report;
  report.experiment = kind == ExperimentKind::Coverage    ? "coverage"
                      : kind == ExperimentKind::Power     ? "power"
                                                          : "conditions";
  report.graph = graph_kind_name(spec, kind);
  report.rho = spec.rho;
  report.n = kind == ExperimentKind::Conditions ? spec.cond_n : spec.n;
  report.p = p;
  report.snr = spec.snr;
  report.lambda_rule = lambda_rule_name(spec.lambda_rule);
  report.replicates = static_cast<int>(outcomes.size());
  report.seed = spec.seed;
  report.qstar = spec.qstar;

  const double nan = std::nan("");
  long long t1 = 0, t2 = 0, irrep = 0, valid = 0;
  long long strong_n = 0, weak_n = 0, null_n = 0;
  long long strong_rej = 0, weak_rej = 0, null_rej = 0;
  std::map<std::vector<int>, int> set_counts;
  long long nonempty = 0;
  double coverage_fraction_sum = 0.0;
  double length_mean_sum = 0.0;

  for (const ReplicateOutcome& out : outcomes) {
    if (out.failed) {
      ++report.failures;
      continue;
    }
    ++valid;
    if (!out.converged) ++report.not_converged;
    if (kind == ExperimentKind::Coverage) {
      if (out.empty) {
        ++report.empty_sets;
      } else {
        ++nonempty;
        report.pairs += out.pairs;
        report.covered += out.covered;
        // Each replicate contributes its within-replicate fraction, so one
        // anomalous large selection counts once, not |A| times.
        coverage_fraction_sum += double(out.covered) / double(out.pairs);
        length_mean_sum += out.length_sum / double(out.pairs);
        ++set_counts[out.active];
      }
    } else if (kind == ExperimentKind::Power) {
      strong_n += out.strong_n;
      weak_n += out.weak_n;
      null_n += out.null_n;
      strong_rej += out.strong_rej;
      weak_rej += out.weak_rej;
      null_rej += out.null_rej;
    } else {
      t1 += out.t1;
      t2 += out.t2;
      irrep += out.irrep;
    }
  }

  if (kind == ExperimentKind::Coverage) {
    report.coverage =
        nonempty > 0 ? coverage_fraction_sum / double(nonempty) : nan;
    report.avg_length =
        nonempty > 0 ? length_mean_sum / double(nonempty) : nan;
    int modal = 0;
    for (const auto& [key, count] : set_counts) modal = std::max(modal, count);
    report.determinism = nonempty > 0 ? double(modal) / double(nonempty) : nan;
  } else if (kind == ExperimentKind::Power) {
    report.power_strong =
        strong_n > 0 ? double(strong_rej) / double(strong_n) : nan;
    report.power_weak = weak_n > 0 ? double(weak_rej) / double(weak_n) : nan;
    report.type1 = null_n > 0 ? double(null_rej) / double(null_n) : nan;
  } else {
    report.prob_t_part1 = valid > 0 ? double(t1) / double(valid) : nan;
    report.prob_t_part2 = valid > 0 ? double(t2) / double(valid) : nan;
    report.prob_irrepresentable =
        valid > 0 ? double(irrep) / double(valid) : nan;
  }
  return report;
}

MetricsReport run_experiment(const ExperimentSpec& spec, ExperimentKind kind) {
  return run(spec, kind, /*parallel=*/true);
}

MetricsReport run_experiment_serial(const ExperimentSpec& spec,
                                    ExperimentKind kind) {
  return run(spec, kind, /*parallel=*/false);
}

namespace {

// Numeric key parts use a fixed-width rendering so lexicographic key order
// agrees with numeric order.
std::string numeric_key(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%022.8f", v);
  return buf;
}

std::vector<std::string> make_key(const MetricsReport& r,
                                  const std::vector<std::string>& keys) {
  std::vector<std::string> key;
  key.reserve(keys.size());
  for (const std::string& k : keys) {
    if (k == "experiment") key.push_back(r.experiment);
    else if (k == "graph") key.push_back(r.graph);
    else if (k == "lambda_rule") key.push_back(r.lambda_rule);
    else if (k == "rho") key.push_back(numeric_key(r.rho));
    else if (k == "n") key.push_back(numeric_key(r.n));
    else if (k == "p") key.push_back(numeric_key(r.p));
    else if (k == "snr") key.push_back(numeric_key(r.snr));
    else if (k == "qstar") key.push_back(numeric_key(r.qstar));
    else fail(ErrorKind::ConfigInvalid, "unknown group key '" + k + "'");
  }
  return key;
}

}  // namespace

std::vector<MetricsReport> summarize_metrics(
    const std::vector<MetricsReport>& reports,
    const std::vector<std::string>& group_keys) {
  if (reports.empty()) fail(ErrorKind::EmptyInput, "no reports to summarize");
  std::map<std::vector<std::string>, std::vector<const MetricsReport*>> groups;
  for (const MetricsReport& r : reports) {
    groups[make_key(r, group_keys)].push_back(&r);
  }
  std::vector<MetricsReport> rows;
  rows.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    MetricsReport row = *members.front();
    if (members.size() > 1) {
      double w_total = 0.0;
      auto rates = {&MetricsReport::coverage, &MetricsReport::avg_length,
                    &MetricsReport::determinism, &MetricsReport::power_strong,
                    &MetricsReport::power_weak, &MetricsReport::type1,
                    &MetricsReport::prob_t_part1, &MetricsReport::prob_t_part2,
                    &MetricsReport::prob_irrepresentable};
      for (auto field : rates) row.*field = 0.0;
      row.replicates = 0;
      row.pairs = row.covered = 0;
      row.empty_sets = row.failures = row.not_converged = 0;
      for (const MetricsReport* m : members) {
        const double w = m->replicates;
        w_total += w;
        for (auto field : rates) row.*field += w * (m->*field);
        row.replicates += m->replicates;
        row.pairs += m->pairs;
        row.covered += m->covered;
        row.empty_sets += m->empty_sets;
        row.failures += m->failures;
        row.not_converged += m->not_converged;
      }
      for (auto field : rates) row.*field /= w_total;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string metrics_csv(ExperimentKind kind,
                        const std::vector<MetricsReport>& reports) {
  std::string out;
  if (kind == ExperimentKind::Coverage) {
    out =
        "experiment,graph,rho,n,p,snr,lambda_rule,replicates,coverage,"
        "avg_length,determinism,empty_sets,failures,seed\n";
    for (const MetricsReport& r : reports) {
      out += r.experiment + "," + r.graph + "," + format_double(r.rho) + "," +
             std::to_string(r.n) + "," + std::to_string(r.p) + "," +
             format_double(r.snr) + "," + r.lambda_rule + "," +
             std::to_string(r.replicates) + "," + format_double(r.coverage) +
             "," + format_double(r.avg_length) + "," +
             format_double(r.determinism) + "," +
             std::to_string(r.empty_sets) + "," + std::to_string(r.failures) +
             "," + std::to_string(r.seed) + "\n";
    }
  } else if (kind == ExperimentKind::Power) {
    out =
        "experiment,graph,rho,n,p,snr,lambda_rule,replicates,power_strong,"
        "power_weak,type1,failures,seed\n";
    for (const MetricsReport& r : reports) {
      out += r.experiment + "," + r.graph + "," + format_double(r.rho) + "," +
             std::to_string(r.n) + "," + std::to_string(r.p) + "," +
             format_double(r.snr) + "," + r.lambda_rule + "," +
             std::to_string(r.replicates) + "," +
             format_double(r.power_strong) + "," +
             format_double(r.power_weak) + "," + format_double(r.type1) + "," +
             std::to_string(r.failures) + "," + std::to_string(r.seed) + "\n";
    }
  } else {
    out =
        "p,qstar,replicates,prob_t_part1,prob_t_part2,prob_irrepresentable,"
        "seed\n";
    for (const MetricsReport& r : reports) {
      out += std::to_string(r.p) + "," + std::to_string(r.qstar) + "," +
             std::to_string(r.replicates) + "," +
             format_double(r.prob_t_part1) + "," +
             format_double(r.prob_t_part2) + "," +
             format_double(r.prob_irrepresentable) + "," +
             std::to_string(r.seed) + "\n";
    }
  }
  return out;
}

}  // namespace postlasso
