#include "postlasso/lasso.hpp"

#include <cmath>

namespace postlasso {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double lasso_objective(const Matrix& x, const Vector& y, const Vector& beta,
                       double lambda) {
  const double n = double(x.rows());
  return (y - x * beta).squaredNorm() / (2.0 * n) +
         lambda * beta.lpNorm<1>();
}

CoordinateDescent::CoordinateDescent(const Matrix& x, const Vector& y,
                                     SolverOptions options)
    : x_(x), y_(y), options_(options) {
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (y_.size() != n) {
    fail(ErrorKind::DimensionMismatch, "X rows and y length differ");
  }
  if (!x.allFinite() || !y_.allFinite()) {
    fail(ErrorKind::NonFinite, "solver input contains NaN or Inf");
  }
  col_norm2_ = x.colwise().squaredNorm() / double(n);
  for (int j = 0; j < p; ++j) {
    if (col_norm2_[j] <= 0.0) {
      fail(ErrorKind::ConstantColumn,
           "column " + std::to_string(j) + " has zero norm");
    }
  }
  xty_ = x.transpose() * y_ / double(n);
  lambda_max_ = xty_.lpNorm<Eigen::Infinity>();
  use_gram_ = options_.mode == SolverOptions::Mode::Covariance ||
              (options_.mode == SolverOptions::Mode::Auto && p <= n);
  if (use_gram_) gram_ = x.transpose() * x / double(n);
}

LassoFit CoordinateDescent::fit(double lambda) const {
  return run(lambda, Vector::Zero(x_.cols()));
}

LassoFit CoordinateDescent::fit_warm(double lambda, const Vector& beta0) const {
  return run(lambda, beta0);
}

LassoFit CoordinateDescent::run(double lambda, Vector beta) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    fail(ErrorKind::OutOfDomain, "lambda must be positive and finite");
  }
  const int n = static_cast<int>(x_.rows());
  const int p = static_cast<int>(x_.cols());

  // State for the two engines: residual r = y - X beta, or g = (X^T X/n) beta.
  Vector residual;
  Vector gram_beta;
  if (use_gram_) {
    gram_beta = Vector::Zero(p);
    for (int j = 0; j < p; ++j) {
      if (beta[j] != 0.0) gram_beta += gram_.col(j) * beta[j];
    }
  } else {
    residual = y_ - x_ * beta;
  }

  std::vector<char> active(static_cast<size_t>(p), 0);
  for (int j = 0; j < p; ++j) active[static_cast<size_t>(j)] = beta[j] != 0.0;

  auto update_coordinate = [&](int j) -> double {
    const double old = beta[j];
    const double grad =
        use_gram_ ? xty_[j] - gram_beta[j] : x_.col(j).dot(residual) / n;
    const double z = old * col_norm2_[j] + grad;
    const double updated = soft_threshold(z, lambda) / col_norm2_[j];
    const double delta = updated - old;
    if (delta != 0.0) {
      beta[j] = updated;
      if (use_gram_) {
        gram_beta += gram_.col(j) * delta;
      } else {
        residual -= x_.col(j) * delta;
      }
    }
    return std::abs(delta);
  };

  auto record_objective = [&] {
    if (options_.objective_trace != nullptr) {
      options_.objective_trace->push_back(lasso_objective(x_, y_, beta,
                                                          lambda));
    }
  };

  int sweeps = 0;
  bool coef_converged = false;
  while (sweeps < options_.max_sweeps) {
    // Full sweep admits new coordinates.
    double max_delta = 0.0;
    for (int j = 0; j < p; ++j) {
      const double d = update_coordinate(j);
      if (d > max_delta) max_delta = d;
      active[static_cast<size_t>(j)] = beta[j] != 0.0;
    }
    ++sweeps;
    record_objective();
    if (max_delta < options_.tol) {
      coef_converged = true;
      break;
    }
    // Iterate the current active set until stable, then re-admit.
    while (sweeps < options_.max_sweeps) {
      double active_delta = 0.0;
      for (int j = 0; j < p; ++j) {
        if (!active[static_cast<size_t>(j)]) continue;
        const double d = update_coordinate(j);
        if (d > active_delta) active_delta = d;
      }
      ++sweeps;
      record_objective();
      if (active_delta < options_.tol) break;
    }
  }

  LassoFit fit;
  fit.lambda = lambda;
  fit.iterations = sweeps;

  // Mandatory final KKT pass; coefficient-change convergence alone can mask
  // stalled coordinates.
  Vector tau;
  if (use_gram_) {
    tau = (xty_ - gram_beta) / lambda;
  } else {
    tau = x_.transpose() * residual / (double(n) * lambda);
  }
  double violation = 0.0;
  for (int j = 0; j < p; ++j) {
    if (beta[j] != 0.0) {
      const double sign = beta[j] > 0.0 ? 1.0 : -1.0;
      violation = std::max(violation, std::abs(tau[j] - sign));
    } else {
      violation = std::max(violation, std::abs(tau[j]) - 1.0);
    }
  }
  fit.kkt_max_violation = std::max(violation, 0.0);
  fit.converged = coef_converged && fit.kkt_max_violation <= options_.kkt_tol;
  fit.beta = CoefficientVector::from(std::move(beta));
  fit.active_set = fit.beta.support;
  return fit;
}

LassoFit fit_lasso(const DesignMatrix& design, const Response& y,
                   double lambda, const SolverOptions& options) {
  CoordinateDescent cd(design.x(), y.y, options);
  return cd.fit(lambda);
}

LassoFit fit_noiseless_lasso(const DesignMatrix& design,
                             const CoefficientVector& beta_star, double lambda,
                             const SolverOptions& options) {
  Response mean_response{design.x() * beta_star.beta};
  return fit_lasso(design, mean_response, lambda, options);
}

StationarityVector kkt_check(const DesignMatrix& design, const Response& y,
                             const LassoFit& fit) {
  const double n = double(design.n());
  StationarityVector sv;
  sv.tau = design.x().transpose() * (y.y - design.x() * fit.beta.beta) /
           (n * fit.lambda);
  double violation = 0.0;
  for (int j = 0; j < design.p(); ++j) {
    if (fit.beta.beta[j] != 0.0) {
      const double sign = fit.beta.beta[j] > 0.0 ? 1.0 : -1.0;
      violation = std::max(violation, std::abs(sv.tau[j] - sign));
    } else {
      violation = std::max(violation, std::abs(sv.tau[j]) - 1.0);
    }
  }
  sv.max_violation = std::max(violation, 0.0);
  return sv;
}

std::vector<LassoFit> lasso_path(const DesignMatrix& design, const Response& y,
                                 const std::vector<double>& lambdas,
                                 const SolverOptions& options) {
  for (size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] < lambdas[i - 1])) {
      fail(ErrorKind::OutOfDomain, "lambda grid must be strictly decreasing");
    }
  }
  CoordinateDescent cd(design.x(), y.y, options);
  std::vector<LassoFit> fits;
  fits.reserve(lambdas.size());
  Vector warm = Vector::Zero(design.p());
  for (double lambda : lambdas) {
    fits.push_back(cd.fit_warm(lambda, warm));
    warm = fits.back().beta.beta;
  }
  return fits;
}

}  // namespace postlasso
