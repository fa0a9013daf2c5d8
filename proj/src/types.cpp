#include "postlasso/types.hpp"

namespace postlasso {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::SingularSubmatrix: return "SingularSubmatrix";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::TooManySelected: return "TooManySelected";
    case ErrorKind::DegenerateResidual: return "DegenerateResidual";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::ZeroSignal: return "ZeroSignal";
    case ErrorKind::InfeasibleDensity: return "InfeasibleDensity";
    case ErrorKind::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

int error_exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigInvalid:
      return 2;
    case ErrorKind::IoError:
    case ErrorKind::MalformedCsv:
    case ErrorKind::TooFewRows:
    case ErrorKind::ConstantColumn:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InsufficientData:
    case ErrorKind::EmptyInput:
      return 3;
    default:
      return 4;
  }
}

SelectedSet SelectedSet::from_indices(std::vector<int> indices, int p) {
  std::sort(indices.begin(), indices.end());
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= p) {
      fail(ErrorKind::OutOfDomain, "selected index out of [0, p)");
    }
    if (i > 0 && indices[i] == indices[i - 1]) {
      fail(ErrorKind::OutOfDomain, "duplicate index in selected set");
    }
  }
  SelectedSet s;
  s.indices_ = std::move(indices);
  return s;
}

SelectedSet SelectedSet::support_of(const Vector& beta) {
  SelectedSet s;
  for (int j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) s.indices_.push_back(j);
  }
  return s;
}

SelectedSet SelectedSet::full(int p) {
  SelectedSet s;
  s.indices_.resize(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) s.indices_[static_cast<size_t>(j)] = j;
  return s;
}

SelectedSet SelectedSet::without(int j) const {
  SelectedSet s;
  s.indices_.reserve(indices_.size());
  for (int idx : indices_) {
    if (idx != j) s.indices_.push_back(idx);
  }
  return s;
}

SelectedSet SelectedSet::complement(int p) const {
  SelectedSet s;
  s.indices_.reserve(static_cast<size_t>(p) - indices_.size());
  size_t k = 0;
  for (int j = 0; j < p; ++j) {
    if (k < indices_.size() && indices_[k] == j) {
      ++k;
    } else {
      s.indices_.push_back(j);
    }
  }
  return s;
}

SelectedSet SelectedSet::minus(const SelectedSet& other) const {
  SelectedSet s;
  for (int j : indices_) {
    if (!other.contains(j)) s.indices_.push_back(j);
  }
  return s;
}

DesignMatrix DesignMatrix::checked(Matrix x) {
  const double n = double(x.rows());
  if (x.rows() < 2 || x.cols() < 1) {
    fail(ErrorKind::DimensionMismatch, "design needs n >= 2, p >= 1");
  }
  for (int j = 0; j < x.cols(); ++j) {
    if (std::abs(x.col(j).sum()) > 1e-8 * n) {
      fail(ErrorKind::OutOfDomain,
           "design column " + std::to_string(j) + " is not centered");
    }
    if (std::abs(x.col(j).squaredNorm() - n) > 1e-6 * n) {
      fail(ErrorKind::OutOfDomain,
           "design column " + std::to_string(j) +
               " does not have squared norm n");
    }
  }
  return DesignMatrix(std::move(x));
}

}  // namespace postlasso
