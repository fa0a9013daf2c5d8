#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace postlasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error taxonomy. Exit-code mapping for the CLI lives in error_exit_code().
enum class ErrorKind {
  ConfigInvalid,
  IoError,
  MalformedCsv,
  TooFewRows,
  ConstantColumn,
  DimensionMismatch,
  InsufficientData,
  EmptyInput,
  OutOfDomain,
  EmptySet,
  SingularSubmatrix,
  RankDeficient,
  TooManySelected,
  DegenerateResidual,
  DegenerateDenominator,
  NotPositiveDefinite,
  ZeroSignal,
  InfeasibleDensity,
  NonFinite,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind);

// 0 success, 2 config error, 3 data error, 4 internal numeric failure.
int error_exit_code(ErrorKind kind);

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, std::string(error_kind_name(kind)) + ": " + msg);
}

// Ordered index set M ⊆ {0..p-1}.
class SelectedSet {
 public:
  SelectedSet() = default;

  // Sorts, rejects duplicates and out-of-range indices.
  static SelectedSet from_indices(std::vector<int> indices, int p);

  // Indices of nonzero entries, in increasing order.
  static SelectedSet support_of(const Vector& beta);

  static SelectedSet full(int p);

  const std::vector<int>& indices() const { return indices_; }
  int q() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[static_cast<size_t>(i)]; }

  bool contains(int j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
  }

  SelectedSet without(int j) const;

  // Complement within {0..p-1}.
  SelectedSet complement(int p) const;

  // Set difference this \ other.
  SelectedSet minus(const SelectedSet& other) const;

  bool operator==(const SelectedSet& other) const {
    return indices_ == other.indices_;
  }
  bool operator<(const SelectedSet& other) const {
    return indices_ < other.indices_;
  }

 private:
  std::vector<int> indices_;
};

// Coefficient vector with its exact support.
struct CoefficientVector {
  Vector beta;
  SelectedSet support;

  static CoefficientVector from(Vector b) {
    CoefficientVector cv;
    cv.support = SelectedSet::support_of(b);
    cv.beta = std::move(b);
    return cv;
  }
};

// Centered/standardized n x p design: every column sums to 0 and has
// squared norm n.
class DesignMatrix {
 public:
  // Validates the standardization invariants (1e-8*n on column sums,
  // 1e-6*n on squared norms).
  static DesignMatrix checked(Matrix x);

  const Matrix& x() const { return x_; }
  int n() const { return static_cast<int>(x_.rows()); }
  int p() const { return static_cast<int>(x_.cols()); }

  // X^T X / n.
  Matrix sigma_hat() const { return (x_.transpose() * x_) / double(n()); }

 private:
  explicit DesignMatrix(Matrix x) : x_(std::move(x)) {}
  Matrix x_;
};

struct Response {
  Vector y;
};

// Projection-defined coefficients of a sub-model.
struct SubmodelTarget {
  Vector beta_m;  // length |M|
};

}  // namespace postlasso
