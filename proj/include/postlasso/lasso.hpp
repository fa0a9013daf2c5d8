#pragma once

#include <optional>

#include "postlasso/types.hpp"

namespace postlasso {

struct SolverOptions {
  double tol = 1e-9;       // max absolute coefficient change per sweep
  int max_sweeps = 100000; // full-equivalent sweeps before giving up
  double kkt_tol = 1e-6;

  // naive: residual updates, O(n) per coordinate.
  // covariance: Gram updates, O(p) per coordinate, pays O(n p^2) once.
  enum class Mode { Auto, Naive, Covariance };
  Mode mode = Mode::Auto;

  // When set, the penalized objective is appended after every sweep.
  std::vector<double>* objective_trace = nullptr;
};

struct LassoFit {
  CoefficientVector beta;
  double lambda = 0.0;
  SelectedSet active_set;  // = supp(beta), exact zeros from soft-thresholding
  double kkt_max_violation = 0.0;
  int iterations = 0;  // sweeps executed
  bool converged = false;
};

// Subgradient certificate tau = X^T(y - X beta) / (n lambda).
struct StationarityVector {
  Vector tau;
  double max_violation = 0.0;
};

// Cyclic coordinate descent bound to one (X, y) problem. Reused across
// lambdas (warm starts) and by the scaled lasso's alternating updates.
// X need not be exactly standardized; per-column norms are handled.
class CoordinateDescent {
 public:
  CoordinateDescent(const Matrix& x, const Vector& y, SolverOptions options);

  LassoFit fit(double lambda) const;
  LassoFit fit_warm(double lambda, const Vector& beta0) const;

  // ||X^T y||_inf / n: smallest lambda with an all-zero solution.
  double lambda_max() const { return lambda_max_; }

 private:
  LassoFit run(double lambda, Vector beta) const;

  const Matrix& x_;
  Vector y_;
  SolverOptions options_;
  bool use_gram_ = false;
  Vector col_norm2_;  // ||x_j||^2 / n
  Vector xty_;        // X^T y / n
  Matrix gram_;       // X^T X / n (covariance mode only)
  double lambda_max_ = 0.0;
};

// (1/2n)||y - X b||^2 + lambda ||b||_1 minimizer. Never throws on failure
// to converge: the fit is returned with converged = false.
LassoFit fit_lasso(const DesignMatrix& design, const Response& y,
                   double lambda, const SolverOptions& options = {});

// Lasso on the noise-free response X beta*; returns beta_lambda and its
// support A_lambda.
LassoFit fit_noiseless_lasso(const DesignMatrix& design,
                             const CoefficientVector& beta_star, double lambda,
                             const SolverOptions& options = {});

StationarityVector kkt_check(const DesignMatrix& design, const Response& y,
                             const LassoFit& fit);

// Warm-started fits over a strictly decreasing lambda grid.
std::vector<LassoFit> lasso_path(const DesignMatrix& design, const Response& y,
                                 const std::vector<double>& lambdas,
                                 const SolverOptions& options = {});

double soft_threshold(double z, double t);

// Penalized objective (1/2n)||y - X b||^2 + lambda ||b||_1.
double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta,
                       double lambda);

}  // namespace postlasso
