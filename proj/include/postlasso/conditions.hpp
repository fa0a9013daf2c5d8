#pragma once

#include <optional>

#include "postlasso/lasso.hpp"
#include "postlasso/types.hpp"

namespace postlasso {

// Numeric audit of the selection-stability assumptions on one instance.
struct ConditionReport {
  SelectedSet s_star;
  SelectedSet a_lambda;
  double t_part1_value = 0.0;  // ||tau_{lambda, A^c}||_inf
  bool t_part1_holds = false;
  double t_part2_value = 0.0;  // the ratio; 0 when vacuous
  bool t_part2_holds = false;
  double irrepresentable_value = 0.0;
  bool irrepresentable_holds = false;
  double m4_weak_sup = 0.0;    // ||beta*_{A \ S*}||_inf
  double m4_tail_norm = 0.0;   // ||X_{A* \ (A ∪ S*)} beta*||_2
  double phi_surrogate = 1.0;
  bool noiseless_converged = true;
};

// S* = { j : |beta*_j| > 3 lambda sqrt(q*) / phi^2 }.
SelectedSet strong_signal_set(const CoefficientVector& beta_star,
                              double lambda, double phi_surrogate, int q_star);

// sqrt(lambda_min(Sigma_{A*,A*})): a computable stand-in for the restricted
// eigenvalue constant, used only to build S* for diagnostics.
double phi_surrogate(const Matrix& sigma_hat, const SelectedSet& a_star);

// Both parts of the selection-stability condition, evaluated on the
// noiseless problem: tau = Sigma (beta* - beta_lambda) / lambda. Part 1
// bounds tau off the noiseless support; part 2 holds when A \ S* is empty
// or the ratio sqrt(log(p)/n)/lambda over the minimum |[Sigma_AA^{-1} tau_A]|
// entry on A \ S* stays below threshold2. An explicit S* overrides the
// surrogate-based construction.
ConditionReport condition_t_check(
    const DesignMatrix& design, const CoefficientVector& beta_star,
    double lambda, double threshold1 = 0.999, double threshold2 = 1.0,
    const std::optional<SelectedSet>& s_star_override = std::nullopt,
    const SolverOptions& options = {});

// ||Sigma_{A^c, A} (Sigma_{A,A})^{-1} sign(beta*_A)||_inf and the strict
// inequality flag.
std::pair<double, bool> irrepresentable_check(const DesignMatrix& design,
                                              const SelectedSet& a_star,
                                              const Vector& sign_beta);

struct M4Magnitudes {
  double weak_sup = 0.0;
  double tail_norm = 0.0;
  bool tail_is_zero = false;  // the only finite-sample case decidable for o(1)
};

// Finite-sample magnitudes behind the signal-strength assumptions; values
// are diagnostics to compare across n, not pass/fail checks.
M4Magnitudes m4_magnitudes(const DesignMatrix& design,
                           const CoefficientVector& beta_star,
                           const SelectedSet& a_lambda,
                           const SelectedSet& s_star);

enum class LindebergMode { W, S };

// ||r||_inf / ||r||_2 for the Lindeberg vectors:
//   W: r = e_j^T (X_A^T X_A)^{-1} X_A^T   (j must belong to a_lambda)
//   S: r = (I - P^{(A \ {j})}) x_j
double lindeberg_ratio(const DesignMatrix& design, const SelectedSet& a_lambda,
                       int j, LindebergMode mode);

}  // namespace postlasso
