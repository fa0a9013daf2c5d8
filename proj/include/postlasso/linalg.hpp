#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "postlasso/types.hpp"

namespace postlasso {

// Cholesky factorization with an explicit rank guard: Eigen's LLT accepts
// exactly singular PSD input, so near-zero pivots must be rejected by hand.
inline Eigen::LLT<Matrix> spd_factor(const Matrix& a, ErrorKind on_fail,
                                     const char* what) {
  Eigen::LLT<Matrix> llt(a);
  bool ok = llt.info() == Eigen::Success;
  if (ok) {
    const Vector pivots = llt.matrixLLT().diagonal();
    const double max_pivot = pivots.maxCoeff();
    const double min_pivot = pivots.minCoeff();
    ok = std::isfinite(max_pivot) && min_pivot > 1e-7 * max_pivot;
  }
  if (!ok) fail(on_fail, what);
  return llt;
}

}  // namespace postlasso
