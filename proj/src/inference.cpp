#include "postlasso/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "postlasso/linalg.hpp"
#include "postlasso/model.hpp"
#include "postlasso/normal.hpp"

namespace postlasso {

OlsFit ols_fit(const DesignMatrix& design, const Response& y,
               const SelectedSet& m) {
  const int q = m.q();
  if (q == 0) fail(ErrorKind::EmptySet, "ols_fit with empty set");
  if (q >= design.n()) {
    fail(ErrorKind::RankDeficient, "ols_fit needs q < n");
  }
  const Matrix xm = select_columns(design.x(), m);
  const auto llt = spd_factor(xm.transpose() * xm, ErrorKind::RankDeficient,
                              "X_M^T X_M is not positive definite");
  OlsFit fit;
  fit.m = m;
  fit.beta_tilde = llt.solve(xm.transpose() * y.y);
  fit.xtx_inv = llt.solve(Matrix::Identity(q, q));
  fit.fitted = xm * fit.beta_tilde;
  fit.rss = (y.y - fit.fitted).squaredNorm();
  return fit;
}

std::vector<ConfidenceInterval> naive_ci(const OlsFit& fit,
                                         const SigmaEstimate& sigma_hat,
                                         double level) {
  if (!(level > 0.0 && level < 1.0)) {
    fail(ErrorKind::OutOfDomain, "confidence level must be in (0, 1)");
  }
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  std::vector<ConfidenceInterval> cis;
  cis.reserve(static_cast<size_t>(fit.m.q()));
  for (int i = 0; i < fit.m.q(); ++i) {
    ConfidenceInterval ci;
    ci.j = fit.m[i];
    ci.estimate = fit.beta_tilde[i];
    ci.se = sigma_hat.sigma * std::sqrt(fit.xtx_inv(i, i));
    ci.lower = ci.estimate - z * ci.se;
    ci.upper = ci.estimate + z * ci.se;
    ci.level = level;
    cis.push_back(ci);
  }
  return cis;
}

ScoreTestResult naive_score_test(const DesignMatrix& design, const Response& y,
                                 const SelectedSet& lambda_set, int j,
                                 const SigmaEstimate& sigma_hat) {
  const SelectedSet cond = lambda_set.without(j);
  if (cond.q() >= design.n()) {
    fail(ErrorKind::RankDeficient, "conditioning set needs |M \\ {j}| < n");
  }
  const Vector xj = design.x().col(j);

  Vector residual_xj;  // (I - P) x_j
  if (cond.empty()) {
    residual_xj = xj;
  } else {
    const Matrix xc = select_columns(design.x(), cond);
    const auto llt = spd_factor(xc.transpose() * xc, ErrorKind::RankDeficient,
                                "conditioning columns rank deficient");
    residual_xj = xj - xc * llt.solve(xc.transpose() * xj);
  }

  const double denom2 = residual_xj.squaredNorm();  // x_j^T (I - P) x_j
  if (denom2 <= 1e-12) {
    fail(ErrorKind::DegenerateDenominator,
         "x_j lies in the span of the conditioning set");
  }
  ScoreTestResult result;
  result.j = j;
  result.score = residual_xj.dot(y.y);
  result.statistic = result.score / (sigma_hat.sigma * std::sqrt(denom2));
  result.p_value = two_sided_p(result.statistic);
  return result;
}

std::vector<HolmResult> holm_adjust(const std::vector<double>& p_values,
                                    double alpha) {
  const size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      fail(ErrorKind::OutOfDomain, "p-values must lie in [0, 1]");
    }
  }
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return p_values[a] < p_values[b];
  });
  std::vector<HolmResult> out(m);
  double running = 0.0;
  for (size_t rank = 0; rank < m; ++rank) {
    const size_t idx = order[rank];
    running = std::max(running, double(m - rank) * p_values[idx]);
    out[idx].adjusted_p = std::min(1.0, running);
    out[idx].reject = out[idx].adjusted_p <= alpha;
  }
  return out;
}

}  // namespace postlasso
