#pragma once

#include <cstdint>
#include <string>

#include "postlasso/inference.hpp"
#include "postlasso/simulate.hpp"
#include "postlasso/types.hpp"

namespace postlasso {

// UTF-8 comma-separated file with a header row; response in column 1,
// predictors in the remaining columns.
struct Dataset {
  std::string response_name;
  std::vector<std::string> names;  // predictor names, length p
  Matrix x;                        // n x p, raw scale
  Vector y;                        // length n
};

Dataset read_dataset_csv(const std::string& path);

struct AnalyzeOptions {
  LambdaRule lambda_rule = LambdaRule::OneSe;
  double fixed_lambda = 0.0;
  double alpha = 0.1;
  bool fwer = true;
  uint64_t seed = 1;
};

struct VariableResult {
  std::string name;
  double score_stat = 0.0;
  double p_value = 1.0;
  double p_holm = 1.0;
  bool reject = false;
  bool selected = false;
};

struct AnalyzeOutput {
  std::vector<VariableResult> rows;  // one per predictor, input order
  double lambda = 0.0;
  double sigma = 0.0;
  SelectedSet active;
};

// Standardizes, picks lambda, fits the lasso, estimates sigma with the
// scaled lasso, then score-tests every variable against the selected set.
// With fwer, rejection uses the Holm-adjusted p-values at level alpha.
AnalyzeOutput analyze_dataset(const Dataset& data,
                              const AnalyzeOptions& options);

struct FitRow {
  std::string name;
  double beta_lasso = 0.0;
  double estimate = 0.0;  // post-selection OLS
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct FitOutput {
  std::vector<FitRow> rows;  // selected variables only
  double lambda = 0.0;
  double sigma = 0.0;
};

// Lasso selection followed by OLS intervals on the selected sub-model,
// reported on the standardized scale.
FitOutput fit_dataset(const Dataset& data, const AnalyzeOptions& options);

std::string analyze_csv(const AnalyzeOutput& out);
std::string fit_csv(const FitOutput& out);

}  // namespace postlasso
