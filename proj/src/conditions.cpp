#include "postlasso/conditions.hpp"

#include <cmath>
#include <limits>

#include "postlasso/linalg.hpp"
#include "postlasso/model.hpp"

namespace postlasso {

SelectedSet strong_signal_set(const CoefficientVector& beta_star,
                              double lambda, double phi, int q_star) {
  if (!(phi > 0.0)) fail(ErrorKind::OutOfDomain, "phi surrogate must be > 0");
  const double threshold =
      3.0 * lambda * std::sqrt(double(q_star)) / (phi * phi);
  std::vector<int> strong;
  for (int j = 0; j < beta_star.beta.size(); ++j) {
    if (std::abs(beta_star.beta[j]) > threshold) strong.push_back(j);
  }
  return SelectedSet::from_indices(std::move(strong),
                                   static_cast<int>(beta_star.beta.size()));
}

double phi_surrogate(const Matrix& sigma_hat, const SelectedSet& a_star) {
  if (a_star.empty()) return 1.0;
  const Matrix block = select_block(sigma_hat, a_star, a_star);
  Eigen::SelfAdjointEigenSolver<Matrix> es(block,
                                           Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig <= 0.0) {
    fail(ErrorKind::SingularSubmatrix, "Sigma_{A*,A*} is not PD");
  }
  return std::sqrt(min_eig);
}

ConditionReport condition_t_check(
    const DesignMatrix& design, const CoefficientVector& beta_star,
    double lambda, double threshold1, double threshold2,
    const std::optional<SelectedSet>& s_star_override,
    const SolverOptions& options) {
  const int p = design.p();
  const int n = design.n();
  const Matrix sigma_hat = design.sigma_hat();

  ConditionReport report;
  const LassoFit noiseless =
      fit_noiseless_lasso(design, beta_star, lambda, options);
  report.noiseless_converged = noiseless.converged;
  report.a_lambda = noiseless.active_set;

  if (s_star_override) {
    report.s_star = *s_star_override;
    report.phi_surrogate = 1.0;
  } else {
    const SelectedSet a_star = beta_star.support;
    report.phi_surrogate = phi_surrogate(sigma_hat, a_star);
    report.s_star = strong_signal_set(beta_star, lambda,
                                      report.phi_surrogate, a_star.q());
  }

  const Vector tau =
      sigma_hat * (beta_star.beta - noiseless.beta.beta) / lambda;

  const SelectedSet inactive = report.a_lambda.complement(p);
  double part1 = 0.0;
  for (int i = 0; i < inactive.q(); ++i) {
    part1 = std::max(part1, std::abs(tau[inactive[i]]));
  }
  report.t_part1_value = part1;
  report.t_part1_holds = part1 < threshold1;

  const SelectedSet extra = report.a_lambda.minus(report.s_star);
  if (extra.empty()) {
    report.t_part2_value = 0.0;  // vacuous
    report.t_part2_holds = true;
  } else {
    const Matrix saa = select_block(sigma_hat, report.a_lambda,
                                    report.a_lambda);
    const auto llt = spd_factor(saa, ErrorKind::SingularSubmatrix,
                                "Sigma_{A,A} is not PD");
    const Vector v = llt.solve(select_entries(tau, report.a_lambda));
    double min_entry = std::numeric_limits<double>::infinity();
    for (int i = 0; i < report.a_lambda.q(); ++i) {
      if (extra.contains(report.a_lambda[i])) {
        min_entry = std::min(min_entry, std::abs(v[i]));
      }
    }
    const double numerator = std::sqrt(std::log(double(p)) / n) / lambda;
    report.t_part2_value = min_entry > 0.0
                               ? numerator / min_entry
                               : std::numeric_limits<double>::infinity();
    report.t_part2_holds = report.t_part2_value < threshold2;
  }
  return report;
}

std::pair<double, bool> irrepresentable_check(const DesignMatrix& design,
                                              const SelectedSet& a_star,
                                              const Vector& sign_beta) {
  if (a_star.empty()) return {0.0, true};
  if (sign_beta.size() != a_star.q()) {
    fail(ErrorKind::DimensionMismatch, "sign vector length must equal |A*|");
  }
  const Matrix sigma_hat = design.sigma_hat();
  const Matrix saa = select_block(sigma_hat, a_star, a_star);
  const auto llt = spd_factor(saa, ErrorKind::SingularSubmatrix,
                              "Sigma_{A*,A*} is not PD");
  const Vector solved = llt.solve(sign_beta);
  const SelectedSet rest = a_star.complement(design.p());
  double value = 0.0;
  for (int i = 0; i < rest.q(); ++i) {
    double dot = 0.0;
    for (int k = 0; k < a_star.q(); ++k) {
      dot += sigma_hat(rest[i], a_star[k]) * solved[k];
    }
    value = std::max(value, std::abs(dot));
  }
  return {value, value < 1.0};
}

M4Magnitudes m4_magnitudes(const DesignMatrix& design,
                           const CoefficientVector& beta_star,
                           const SelectedSet& a_lambda,
                           const SelectedSet& s_star) {
  M4Magnitudes out;
  const SelectedSet weak = a_lambda.minus(s_star);
  for (int i = 0; i < weak.q(); ++i) {
    out.weak_sup = std::max(out.weak_sup, std::abs(beta_star.beta[weak[i]]));
  }
  SelectedSet tail = beta_star.support.minus(a_lambda).minus(s_star);
  out.tail_is_zero = tail.empty();
  if (!tail.empty()) {
    const Matrix xt = select_columns(design.x(), tail);
    out.tail_norm = (xt * select_entries(beta_star.beta, tail)).norm();
  }
  return out;
}

double lindeberg_ratio(const DesignMatrix& design, const SelectedSet& a_lambda,
                       int j, LindebergMode mode) {
  Vector r;
  if (mode == LindebergMode::W) {
    if (!a_lambda.contains(j)) {
      fail(ErrorKind::OutOfDomain, "mode W needs j in the active set");
    }
    const Matrix xa = select_columns(design.x(), a_lambda);
    const auto llt = spd_factor(xa.transpose() * xa, ErrorKind::RankDeficient,
                                "X_A^T X_A is not PD");
    Vector ej = Vector::Zero(a_lambda.q());
    for (int i = 0; i < a_lambda.q(); ++i) {
      if (a_lambda[i] == j) ej[i] = 1.0;
    }
    r = xa * llt.solve(ej);  // row vector e_j (X_A^T X_A)^{-1} X_A^T
  } else {
    const SelectedSet cond = a_lambda.without(j);
    const Vector xj = design.x().col(j);
    if (cond.empty()) {
      r = xj;
    } else {
      const Matrix xc = select_columns(design.x(), cond);
      const auto llt = spd_factor(xc.transpose() * xc,
                                  ErrorKind::RankDeficient,
                                  "conditioning columns rank deficient");
      r = xj - xc * llt.solve(xc.transpose() * xj);
    }
  }
  const double two_norm = r.norm();
  if (two_norm == 0.0) {
    fail(ErrorKind::DegenerateDenominator, "Lindeberg vector is zero");
  }
  return r.lpNorm<Eigen::Infinity>() / two_norm;
}

}  // namespace postlasso
