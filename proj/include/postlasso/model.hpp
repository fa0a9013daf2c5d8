#pragma once

#include "postlasso/types.hpp"

namespace postlasso {

struct StandardizedData {
  DesignMatrix design;
  Response response;
  Vector col_means;   // length p
  Vector col_scales;  // length p, raw column = scale * standardized + mean
  double y_mean = 0.0;
};

// Centers each column and rescales it to squared norm n; centers y to mean
// zero. Throws ConstantColumn(j) for zero-variance columns and
// DimensionMismatch when row counts differ.
StandardizedData standardize(const Matrix& raw_x, const Vector& raw_y);

// beta^(M) = [Sigma_{M,M}]^{-1} Sigma_{M,.} beta*, solved by Cholesky.
SubmodelTarget submodel_target(const Matrix& sigma_hat,
                               const CoefficientVector& beta_star,
                               const SelectedSet& m);

// Same quantity computed from the design directly:
// (X_M^T X_M)^{-1} X_M^T X beta*.
SubmodelTarget submodel_target(const DesignMatrix& design,
                               const CoefficientVector& beta_star,
                               const SelectedSet& m);

// Columns of `x` indexed by m.
Matrix select_columns(const Matrix& x, const SelectedSet& m);

// sigma[m, m].
Matrix select_block(const Matrix& sigma, const SelectedSet& rows,
                    const SelectedSet& cols);

Vector select_entries(const Vector& v, const SelectedSet& m);

}  // namespace postlasso
