#include "postlasso/model.hpp"

#include <cmath>

#include "postlasso/linalg.hpp"

namespace postlasso {

StandardizedData standardize(const Matrix& raw_x, const Vector& raw_y) {
  const int n = static_cast<int>(raw_x.rows());
  const int p = static_cast<int>(raw_x.cols());
  if (raw_y.size() != n) {
    fail(ErrorKind::DimensionMismatch,
         "X has " + std::to_string(n) + " rows but y has " +
             std::to_string(raw_y.size()));
  }
  if (n < 2 || p < 1) {
    fail(ErrorKind::DimensionMismatch, "standardize needs n >= 2, p >= 1");
  }
  if (!raw_x.allFinite() || !raw_y.allFinite()) {
    fail(ErrorKind::NonFinite, "input contains NaN or Inf");
  }

  Matrix x = raw_x;
  Vector col_means(p), col_scales(p);
  for (int j = 0; j < p; ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    // scale so that ||x_j||^2 = n
    const double scale = std::sqrt(x.col(j).squaredNorm() / double(n));
    if (scale <= 0.0 || !std::isfinite(1.0 / scale)) {
      fail(ErrorKind::ConstantColumn,
           "column " + std::to_string(j) + " has zero variance");
    }
    x.col(j) /= scale;
    col_means[j] = mean;
    col_scales[j] = scale;
  }
  const double y_mean = raw_y.mean();
  return StandardizedData{DesignMatrix::checked(std::move(x)),
                          Response{raw_y.array() - y_mean},
                          std::move(col_means), std::move(col_scales), y_mean};
}

Matrix select_columns(const Matrix& x, const SelectedSet& m) {
  Matrix out(x.rows(), m.q());
  for (int i = 0; i < m.q(); ++i) out.col(i) = x.col(m[i]);
  return out;
}

Matrix select_block(const Matrix& sigma, const SelectedSet& rows,
                    const SelectedSet& cols) {
  Matrix out(rows.q(), cols.q());
  for (int i = 0; i < rows.q(); ++i) {
    for (int j = 0; j < cols.q(); ++j) out(i, j) = sigma(rows[i], cols[j]);
  }
  return out;
}

Vector select_entries(const Vector& v, const SelectedSet& m) {
  Vector out(m.q());
  for (int i = 0; i < m.q(); ++i) out[i] = v[m[i]];
  return out;
}

namespace {

// Cholesky solve with failure on non-PD input; regularizing here would
// silently change the target.
Vector spd_solve(const Matrix& a, const Vector& b, ErrorKind on_fail) {
  return spd_factor(a, on_fail, "Cholesky factorization failed").solve(b);
}

}  // namespace

SubmodelTarget submodel_target(const Matrix& sigma_hat,
                               const CoefficientVector& beta_star,
                               const SelectedSet& m) {
  if (m.empty()) fail(ErrorKind::EmptySet, "submodel_target with empty M");
  if (sigma_hat.rows() != sigma_hat.cols() ||
      sigma_hat.rows() != beta_star.beta.size()) {
    fail(ErrorKind::DimensionMismatch, "Sigma and beta* sizes disagree");
  }
  Vector rhs(m.q());
  for (int i = 0; i < m.q(); ++i) {
    rhs[i] = sigma_hat.row(m[i]).dot(beta_star.beta);
  }
  const Matrix smm = select_block(sigma_hat, m, m);
  return SubmodelTarget{spd_solve(smm, rhs, ErrorKind::SingularSubmatrix)};
}

SubmodelTarget submodel_target(const DesignMatrix& design,
                               const CoefficientVector& beta_star,
                               const SelectedSet& m) {
  if (m.empty()) fail(ErrorKind::EmptySet, "submodel_target with empty M");
  if (design.p() != beta_star.beta.size()) {
    fail(ErrorKind::DimensionMismatch, "design and beta* sizes disagree");
  }
  const Matrix xm = select_columns(design.x(), m);
  const Vector xbeta = design.x() * beta_star.beta;
  return SubmodelTarget{spd_solve(xm.transpose() * xm, xm.transpose() * xbeta,
                                  ErrorKind::SingularSubmatrix)};
}

}  // namespace postlasso
