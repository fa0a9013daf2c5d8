#pragma once

#include "postlasso/types.hpp"
#include "postlasso/variance.hpp"

namespace postlasso {

struct OlsFit {
  SelectedSet m;
  Vector beta_tilde;  // length q
  Matrix xtx_inv;     // (X_M^T X_M)^{-1}, kept for standard errors
  Vector fitted;      // length n
  double rss = 0.0;
};

struct ConfidenceInterval {
  int j = 0;  // variable index in the full design
  double estimate = 0.0;
  double se = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
};

struct ScoreTestResult {
  int j = 0;
  double statistic = 0.0;  // T
  double p_value = 1.0;
  double score = 0.0;  // S^j
};

struct HolmResult {
  double adjusted_p = 1.0;
  bool reject = false;
};

// Least squares on the columns in M, via Cholesky of X_M^T X_M.
OlsFit ols_fit(const DesignMatrix& design, const Response& y,
               const SelectedSet& m);

// Classical OLS intervals on the selected sub-model, no selection
// adjustment. Uses the diagonal of (X_M^T X_M)^{-1}.
std::vector<ConfidenceInterval> naive_ci(const OlsFit& fit,
                                         const SigmaEstimate& sigma_hat,
                                         double level);

// Score statistic for H0: beta*_j = 0 with conditioning set
// lambda_set \ {j}: S = x_j^T (I - P) y, T = S / (sigma ||(I - P) x_j||).
// The projection is applied through a Cholesky solve; the n x n projector
// is never formed.
ScoreTestResult naive_score_test(const DesignMatrix& design, const Response& y,
                                 const SelectedSet& lambda_set, int j,
                                 const SigmaEstimate& sigma_hat);

// Holm step-down adjustment; flags returned in the input order.
// reject[i] holds exactly when adjusted_p[i] <= alpha.
std::vector<HolmResult> holm_adjust(const std::vector<double>& p_values,
                                    double alpha);

}  // namespace postlasso
