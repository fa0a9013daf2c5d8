#pragma once

#include <cstdint>
#include <string>

#include "postlasso/graphs.hpp"
#include "postlasso/rng.hpp"
#include "postlasso/types.hpp"

namespace postlasso {

enum class LambdaRule { OneSe, Sup, Min, Fixed };

const char* lambda_rule_name(LambdaRule rule);
LambdaRule lambda_rule_from_name(const std::string& name, double* fixed_value);

enum class ExperimentKind { Coverage, Power, Conditions };

// Noiseless-lasso tuning for the condition audit, as a multiple of
// sqrt(log(p)/n). The audit needs lambda well above the estimation rate;
// this value reproduces the reference part-2 probabilities at n = 1000.
constexpr double kConditionLambdaMult = 10.0;

struct ExperimentSpec {
  GraphSpec graph;
  double rho = 0.2;
  int n = 300;
  double snr = 0.3;
  Vector beta_star;
  LambdaRule lambda_rule = LambdaRule::Sup;
  double fixed_lambda = 0.0;
  int replicates = 100;
  double alpha = 0.05;
  uint64_t seed = 1;
  int threads = 0;  // 0 = all available
  // sigma_eps > 0 bypasses the SNR calibration (required when beta* = 0)
  double sigma_eps = 0.0;
  // condition-audit parameters
  int qstar = 1;
  int cond_n = 1000;
  double cond_lambda_mult = kConditionLambdaMult;
  double cond_threshold1 = 0.999;
  double cond_threshold2 = 1.0;
};

struct MetricsReport {
  std::string experiment;
  std::string graph;
  double rho = 0.0;
  int n = 0;
  int p = 0;
  double snr = 0.0;
  std::string lambda_rule;
  int replicates = 0;
  uint64_t seed = 0;
  int qstar = 0;

  double coverage = 0.0;
  double avg_length = 0.0;
  double determinism = 0.0;
  long long pairs = 0;
  long long covered = 0;
  int empty_sets = 0;

  double power_strong = 0.0;
  double power_weak = 0.0;
  double type1 = 0.0;

  double prob_t_part1 = 0.0;
  double prob_t_part2 = 0.0;
  double prob_irrepresentable = 0.0;

  int failures = 0;
  int not_converged = 0;
  bool pd_inflated = false;  // covariance built with the inflated precision
};

// One replicate's contribution; aggregation is a deterministic fold over
// replicate index order.
struct ReplicateOutcome {
  bool failed = false;
  bool converged = true;
  bool empty = false;
  int pairs = 0;
  int covered = 0;
  double length_sum = 0.0;
  std::vector<int> active;
  int strong_n = 0, weak_n = 0, null_n = 0;
  int strong_rej = 0, weak_rej = 0, null_rej = 0;
  bool t1 = false, t2 = false, irrep = false;
};

// Named coefficient layouts: "coverage" = (1, 0.1 x4, 0...),
// "power" = (1 x3, 0.1 x7, 0...), "null" = all zeros.
Vector beta_pattern(const std::string& name, int p);

// Rows ~ N(0, Sigma) drawn via the Cholesky factor, then standardized.
struct SampledDesign {
  DesignMatrix design;
  Matrix raw;
};
SampledDesign sample_design(const CovarianceModel& model, int n,
                            uint64_t seed);
SampledDesign sample_design(const Matrix& chol_lower, int n, Rng& rng);

// sigma_eps = sqrt(beta*^T Sigma beta* / snr).
double sigma_eps_from_snr(const CovarianceModel& model,
                          const CoefficientVector& beta_star, double snr);

// Executes spec.replicates independent replicates. The parallel entry point
// runs them under OpenMP; run_experiment_serial is the plain-loop reference
// the tests compare against. Identical spec gives an identical report for
// any thread count.
MetricsReport run_experiment(const ExperimentSpec& spec, ExperimentKind kind);
MetricsReport run_experiment_serial(const ExperimentSpec& spec,
                                    ExperimentKind kind);

// Pooled aggregation of per-replicate outcomes (exposed for fixture tests).
MetricsReport aggregate_outcomes(const ExperimentSpec& spec,
                                 ExperimentKind kind,
                                 const std::vector<ReplicateOutcome>& outcomes,
                                 int p);

// Deterministic grouped aggregation: rate fields are replicate-weighted
// means, count fields are summed. Rows sort lexicographically by the group
// key tuple.
std::vector<MetricsReport> summarize_metrics(
    const std::vector<MetricsReport>& reports,
    const std::vector<std::string>& group_keys);

// Exact result-CSV schemas (one row per report).
std::string metrics_csv(ExperimentKind kind,
                        const std::vector<MetricsReport>& reports);

std::string format_double(double v);  // 6 significant digits

}  // namespace postlasso
