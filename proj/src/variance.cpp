#include "postlasso/variance.hpp"

#include <cmath>

#include "postlasso/linalg.hpp"
#include "postlasso/model.hpp"

namespace postlasso {

SigmaEstimate scaled_lasso_sigma(const DesignMatrix& design, const Response& y,
                                 double lambda0, double tol, int max_iter,
                                 const SolverOptions& options) {
  const int n = design.n();
  const int p = design.p();
  if (lambda0 <= 0.0) lambda0 = std::sqrt(2.0 * std::log(double(p)) / n);

  CoordinateDescent cd(design.x(), y.y, options);
  const double y_mean = y.y.mean();
  double sigma = std::sqrt((y.y.array() - y_mean).square().sum() / n);
  if (sigma < 1e-12) {
    fail(ErrorKind::DegenerateResidual, "response is (numerically) constant");
  }
  if (lambda0 == 0.0) {
    // p == 1 makes the default lambda0 vanish; the fixed point is plain OLS.
    const Vector beta = Eigen::LLT<Matrix>(design.x().transpose() * design.x())
                            .solve(design.x().transpose() * y.y);
    sigma = std::sqrt((y.y - design.x() * beta).squaredNorm() / n);
    if (sigma < 1e-12) {
      fail(ErrorKind::DegenerateResidual, "zero OLS residual");
    }
    return SigmaEstimate{sigma, SigmaEstimate::Method::ScaledLasso, n};
  }

  Vector warm = Vector::Zero(p);
  for (int it = 0; it < max_iter; ++it) {
    const LassoFit fit = cd.fit_warm(lambda0 * sigma, warm);
    warm = fit.beta.beta;
    const double next = std::sqrt((y.y - design.x() * warm).squaredNorm() / n);
    if (next < 1e-12) {
      fail(ErrorKind::DegenerateResidual,
           "scaled lasso residual underflow (interpolation regime)");
    }
    // Relative change: a fixed point at zero (interpolating fits) keeps
    // shrinking until the underflow guard fires instead of stalling.
    const double change = std::abs(next - sigma) / next;
    sigma = next;
    if (change < tol) break;
  }
  return SigmaEstimate{sigma, SigmaEstimate::Method::ScaledLasso, n};
}

SigmaEstimate rss_sigma(const DesignMatrix& design, const Response& y,
                        const SelectedSet& selected) {
  const int n = design.n();
  const int q = selected.q();
  if (q == 0) {
    const double s2 = y.y.squaredNorm() / n;
    return SigmaEstimate{std::sqrt(s2), SigmaEstimate::Method::Rss, n};
  }
  if (q >= n) {
    fail(ErrorKind::TooManySelected,
         "selected " + std::to_string(q) + " of n = " + std::to_string(n));
  }
  const Matrix xm = select_columns(design.x(), selected);
  const auto llt = spd_factor(xm.transpose() * xm, ErrorKind::RankDeficient,
                              "selected columns are rank deficient");
  const Vector beta = llt.solve(xm.transpose() * y.y);
  const double rss = (y.y - xm * beta).squaredNorm();
  return SigmaEstimate{std::sqrt(rss / double(n - q)),
                       SigmaEstimate::Method::Rss, n - q};
}

}  // namespace postlasso
