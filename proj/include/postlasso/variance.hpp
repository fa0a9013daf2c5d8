#pragma once

#include "postlasso/lasso.hpp"
#include "postlasso/types.hpp"

namespace postlasso {

struct SigmaEstimate {
  double sigma = 0.0;
  enum class Method { ScaledLasso, Rss } method = Method::ScaledLasso;
  int df_used = 0;
};

// Scaled lasso: alternate beta <- lasso(X, y, lambda0 * sigma) and
// sigma <- ||y - X beta|| / sqrt(n) to a fixed point. lambda0 <= 0 selects
// the default sqrt(2 log(p) / n). Throws DegenerateResidual when sigma
// underflows (interpolation regime).
SigmaEstimate scaled_lasso_sigma(const DesignMatrix& design, const Response& y,
                                 double lambda0 = 0.0, double tol = 1e-6,
                                 int max_iter = 100,
                                 const SolverOptions& options = {});

// Post-selection OLS residual variance: sigma^2 = RSS / (n - q). An empty
// set gives sigma^2 = ||y||^2 / n for centered y.
SigmaEstimate rss_sigma(const DesignMatrix& design, const Response& y,
                        const SelectedSet& selected);

}  // namespace postlasso
