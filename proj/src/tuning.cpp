#include "postlasso/tuning.hpp"

#include <cmath>
#include <numeric>

#include "postlasso/rng.hpp"

namespace postlasso {

std::vector<double> lambda_grid(const DesignMatrix& design, const Response& y,
                                int n_points, double ratio) {
  if (n_points < 2) fail(ErrorKind::OutOfDomain, "grid needs n_points >= 2");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    fail(ErrorKind::OutOfDomain, "grid ratio must be in (0, 1)");
  }
  const double lambda_max =
      (design.x().transpose() * y.y).lpNorm<Eigen::Infinity>() /
      double(design.n());
  const double log_max = std::log(lambda_max);
  const double log_min = std::log(lambda_max * ratio);
  std::vector<double> grid(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double t = double(i) / double(n_points - 1);
    grid[static_cast<size_t>(i)] = std::exp(log_max + t * (log_min - log_max));
  }
  grid.front() = lambda_max;
  grid.back() = lambda_max * ratio;
  return grid;
}

CvResult cross_validate(const DesignMatrix& design, const Response& y, int k,
                        const std::vector<double>& grid, uint64_t seed,
                        const SolverOptions& options) {
  const int n = design.n();
  const int p = design.p();
  const int n_lambda = static_cast<int>(grid.size());
  if (k < 2) fail(ErrorKind::OutOfDomain, "cross_validate needs k >= 2");
  if (k > n) fail(ErrorKind::InsufficientData, "more folds than observations");

  // Fold assignment depends only on (seed, n, k).
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::substream(seed, stream::kFolds);
  rng.shuffle(order);
  std::vector<int> fold_of(static_cast<size_t>(n));
  {
    const int base = n / k;
    const int extra = n % k;
    int pos = 0;
    for (int f = 0; f < k; ++f) {
      const int size = base + (f < extra ? 1 : 0);
      if (size == 0) fail(ErrorKind::InsufficientData, "empty CV fold");
      for (int i = 0; i < size; ++i) {
        fold_of[static_cast<size_t>(order[static_cast<size_t>(pos++)])] = f;
      }
    }
  }

  // fold_mse(f, l): held-out PMSE of fold f at grid[l].
  Matrix fold_mse(k, n_lambda);
  for (int f = 0; f < k; ++f) {
    std::vector<int> train, test;
    for (int i = 0; i < n; ++i) {
      (fold_of[static_cast<size_t>(i)] == f ? test : train).push_back(i);
    }
    Matrix x_train(train.size(), p), x_test(test.size(), p);
    Vector y_train(train.size()), y_test(test.size());
    for (size_t i = 0; i < train.size(); ++i) {
      x_train.row(static_cast<Eigen::Index>(i)) = design.x().row(train[i]);
      y_train[static_cast<Eigen::Index>(i)] = y.y[train[i]];
    }
    for (size_t i = 0; i < test.size(); ++i) {
      x_test.row(static_cast<Eigen::Index>(i)) = design.x().row(test[i]);
      y_test[static_cast<Eigen::Index>(i)] = y.y[test[i]];
    }
    CoordinateDescent cd(x_train, y_train, options);
    Vector warm = Vector::Zero(p);
    for (int l = 0; l < n_lambda; ++l) {
      const LassoFit fit = cd.fit_warm(grid[static_cast<size_t>(l)], warm);
      warm = fit.beta.beta;
      fold_mse(f, l) =
          (y_test - x_test * fit.beta.beta).squaredNorm() / double(test.size());
    }
  }

  CvResult result;
  result.lambdas = grid;
  result.mean_pmse.resize(static_cast<size_t>(n_lambda));
  result.se_pmse.resize(static_cast<size_t>(n_lambda));
  for (int l = 0; l < n_lambda; ++l) {
    const double mean = fold_mse.col(l).mean();
    const double var =
        (fold_mse.col(l).array() - mean).square().sum() / double(k - 1);
    result.mean_pmse[static_cast<size_t>(l)] = mean;
    result.se_pmse[static_cast<size_t>(l)] = std::sqrt(var / double(k));
  }

  // Ties break toward the larger lambda (grid is decreasing).
  int i_min = 0;
  for (int l = 1; l < n_lambda; ++l) {
    if (result.mean_pmse[static_cast<size_t>(l)] <
        result.mean_pmse[static_cast<size_t>(i_min)]) {
      i_min = l;
    }
  }
  result.lambda_min = grid[static_cast<size_t>(i_min)];
  const double threshold = result.mean_pmse[static_cast<size_t>(i_min)] +
                           result.se_pmse[static_cast<size_t>(i_min)];
  int i_1se = i_min;
  for (int l = 0; l <= i_min; ++l) {
    if (result.mean_pmse[static_cast<size_t>(l)] <= threshold) {
      i_1se = l;
      break;
    }
  }
  result.lambda_1se = grid[static_cast<size_t>(i_1se)];
  return result;
}

double lambda_sup(const DesignMatrix& design, double sigma_hat, int n_mc,
                  uint64_t seed) {
  if (sigma_hat < 0.0) fail(ErrorKind::OutOfDomain, "sigma_hat must be >= 0");
  if (n_mc < 1) fail(ErrorKind::OutOfDomain, "lambda_sup needs n_mc >= 1");
  const int n = design.n();
  Rng rng = Rng::substream(seed, stream::kLambdaSup);
  Vector e(n);
  double total = 0.0;
  for (int r = 0; r < n_mc; ++r) {
    for (int i = 0; i < n; ++i) e[i] = rng.next_normal();
    total += (design.x().transpose() * e).lpNorm<Eigen::Infinity>();
  }
  // e enters linearly, so sigma_hat scales the estimate exactly.
  return 2.0 * sigma_hat * total / (double(n_mc) * double(n));
}

}  // namespace postlasso
