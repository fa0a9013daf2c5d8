#pragma once

#include <cstdint>

#include "postlasso/lasso.hpp"
#include "postlasso/types.hpp"

namespace postlasso {

struct CvResult {
  std::vector<double> lambdas;    // strictly decreasing
  std::vector<double> mean_pmse;  // per lambda
  std::vector<double> se_pmse;    // per lambda, across fold means
  double lambda_min = 0.0;
  double lambda_1se = 0.0;
};

// Log-spaced grid from lambda_max = ||X^T y||_inf / n down to
// ratio * lambda_max.
std::vector<double> lambda_grid(const DesignMatrix& design, const Response& y,
                                int n_points = 100, double ratio = 1e-3);

// k-fold CV over the grid. Fold assignment is a function of (seed, n, k)
// only: indices are shuffled once and split into k near-equal blocks.
CvResult cross_validate(const DesignMatrix& design, const Response& y, int k,
                        const std::vector<double>& grid, uint64_t seed,
                        const SolverOptions& options = {});

// lambda_sup = 2 E[||X^T e||_inf] / n with e ~ N(0, sigma_hat^2 I),
// the expectation approximated by n_mc Monte Carlo replicates. Depends on
// the design and sigma_hat only, never on y.
double lambda_sup(const DesignMatrix& design, double sigma_hat,
                  int n_mc = 1000, uint64_t seed = 0);

}  // namespace postlasso
