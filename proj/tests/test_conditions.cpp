#include <doctest.h>

#include <cmath>
#include <limits>

#include "postlasso/conditions.hpp"
#include "postlasso/graphs.hpp"
#include "postlasso/model.hpp"
#include "postlasso/simulate.hpp"
#include "test_helpers.hpp"

namespace pl = postlasso;
using test_support::hadamard_design;
using test_support::random_normal_vector;
using test_support::random_standardized;

TEST_CASE("strong signal set thresholding") {
  pl::Vector beta(3);
  beta << 1.0, 0.1, 0.0;
  const auto cv = pl::CoefficientVector::from(beta);
  const auto s = pl::strong_signal_set(cv, 0.1, 1.0, 2);
  CHECK(s.indices() == std::vector<int>{0});  // threshold ~0.424

  CHECK(pl::strong_signal_set(cv, 0.0, 1.0, 2).indices() ==
        std::vector<int>{0, 1});  // lambda = 0: all of supp(beta*)

  const auto zero = pl::CoefficientVector::from(pl::Vector::Zero(3));
  CHECK(pl::strong_signal_set(zero, 0.1, 1.0, 0).empty());
}

TEST_CASE("strong signal set shrinks as lambda grows") {
  pl::Rng rng(3);
  pl::Vector beta(10);
  for (int j = 0; j < 10; ++j) beta[j] = rng.next_normal();
  const auto cv = pl::CoefficientVector::from(beta);
  int last_q = 11;
  for (double lambda : {0.0, 0.05, 0.1, 0.3, 1.0}) {
    const auto s = pl::strong_signal_set(cv, lambda, 0.8, 10);
    CHECK(s.q() <= last_q);
    last_q = s.q();
  }
}

TEST_CASE("condition T on an orthonormal design with clean signals") {
  const auto design = pl::DesignMatrix::checked(hadamard_design(16, 6));
  pl::Vector beta = pl::Vector::Zero(6);
  beta[0] = 5.0;
  beta[3] = -4.0;
  const auto report = pl::condition_t_check(
      design, pl::CoefficientVector::from(beta), 0.5);
  CHECK(report.t_part1_value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.t_part1_holds);
  CHECK(report.t_part2_holds);  // A_lambda = S*, vacuous
  CHECK(report.t_part2_value == 0.0);
  CHECK(report.a_lambda == report.s_star);
}

TEST_CASE("condition T part-2 ratio matches a hand computation") {
  // Orthonormal design, beta* = (1, 0.7, 0), lambda = 0.5, explicit
  // S* = {0}: the noiseless solution soft-thresholds to (0.5, 0.2, 0),
  // A = {0, 1}, tau_A = (1, 1), so the ratio is sqrt(log(3)/n) / 0.5.
  const int n = 64;
  const auto design = pl::DesignMatrix::checked(hadamard_design(n, 3));
  pl::Vector beta(3);
  beta << 1.0, 0.7, 0.0;
  const auto report = pl::condition_t_check(
      design, pl::CoefficientVector::from(beta), 0.5, 0.999, 1.0,
      pl::SelectedSet::from_indices({0}, 3));
  CHECK(report.a_lambda.indices() == std::vector<int>{0, 1});
  const double expected = std::sqrt(std::log(3.0) / n) / 0.5;
  CHECK(report.t_part2_value == doctest::Approx(expected).epsilon(1e-7));
  CHECK(report.t_part2_holds);
  CHECK(report.t_part1_value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("condition T explicit strong set overrides the surrogate") {
  pl::Rng rng(7);
  const int n = 300, p = 10;
  const auto design =
      pl::DesignMatrix::checked(random_standardized(n, p, rng));
  pl::Vector beta = pl::Vector::Zero(p);
  for (int j = 0; j < 4; ++j) beta[j] = 1.0;
  const auto cv = pl::CoefficientVector::from(beta);
  const auto s_star = cv.support;
  const double lambda = 9.5 * std::sqrt(std::log(double(p)) / n);
  const auto report =
      pl::condition_t_check(design, cv, lambda, 0.999, 1.0, s_star);
  CHECK(report.s_star == s_star);
  // tau certificate off the noiseless support stays within the subgradient
  // bound.
  CHECK(report.t_part1_value <= 1.0 + 1e-6);
}

TEST_CASE("irrepresentable condition on orthogonal and exact designs") {
  const auto design = pl::DesignMatrix::checked(hadamard_design(16, 6));
  const auto a_star = pl::SelectedSet::from_indices({0, 2}, 6);
  const auto [value, holds] =
      pl::irrepresentable_check(design, a_star, pl::Vector::Ones(2));
  CHECK(value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(holds);

  const auto [zero_value, zero_holds] =
      pl::irrepresentable_check(design, pl::SelectedSet{}, pl::Vector(0));
  CHECK(zero_value == 0.0);
  CHECK(zero_holds);
}

TEST_CASE("irrepresentable value matches a dense computation") {
  pl::Rng rng(11);
  const int n = 80, p = 7;
  const auto design =
      pl::DesignMatrix::checked(random_standardized(n, p, rng));
  const auto a_star = pl::SelectedSet::from_indices({1, 3, 4}, p);
  pl::Vector signs(3);
  signs << 1.0, -1.0, 1.0;
  const auto [value, holds] =
      pl::irrepresentable_check(design, a_star, signs);

  const pl::Matrix sigma = design.sigma_hat();
  const pl::Matrix saa = pl::select_block(sigma, a_star, a_star);
  const auto rest = a_star.complement(p);
  const pl::Matrix sca = pl::select_block(sigma, rest, a_star);
  const double dense =
      (sca * saa.inverse() * signs).lpNorm<Eigen::Infinity>();
  CHECK(value == doctest::Approx(dense).epsilon(1e-10));
  CHECK(holds == (dense < 1.0));
}

TEST_CASE("m4 magnitudes on boundary configurations") {
  pl::Rng rng(13);
  const int n = 50, p = 6;
  const auto design =
      pl::DesignMatrix::checked(random_standardized(n, p, rng));
  pl::Vector beta(p);
  beta << 1.0, 0.5, 0.2, 0.0, 0.0, 0.0;
  const auto cv = pl::CoefficientVector::from(beta);
  const auto a_star = cv.support;

  // A_lambda covers A*: no unselected signal mass.
  const auto covering =
      pl::m4_magnitudes(design, cv, pl::SelectedSet::full(p), a_star);
  CHECK(covering.tail_norm == 0.0);
  CHECK(covering.tail_is_zero);

  // S* = A_lambda: no weak selected signals.
  const auto matched = pl::m4_magnitudes(design, cv, a_star, a_star);
  CHECK(matched.weak_sup == 0.0);

  // One signal outside A_lambda and S*: tail norm is that column's mass.
  const auto partial = pl::m4_magnitudes(
      design, cv, pl::SelectedSet::from_indices({0}, p),
      pl::SelectedSet::from_indices({0, 1}, p));
  CHECK(partial.tail_norm ==
        doctest::Approx((design.x().col(2) * 0.2).norm()).epsilon(1e-12));
  CHECK(partial.weak_sup == 0.0);
}

TEST_CASE("unselected signal mass shrinks as n grows") {
  // Coverage-pattern instance with lambda at the weak-signal boundary:
  // the average tail norm over design draws decreases through
  // n in {300, 400, 500}.
  pl::GraphSpec gs;
  gs.kind = pl::GraphKind::ScaleFree;
  gs.p = 100;
  gs.edge_density = 0.05;
  gs.signal_count = 5;
  gs.rank_step = 10;
  const auto edges = pl::generate_graph(gs, 1);
  const auto model = pl::covariance_from_graph(edges, 100, 0.2);
  Eigen::LLT<pl::Matrix> llt(model.sigma);
  const pl::Matrix chol = llt.matrixL();
  const auto cv = pl::CoefficientVector::from(pl::beta_pattern("coverage", 100));

  double last = std::numeric_limits<double>::infinity();
  for (int n : {300, 400, 500}) {
    double tail = 0.0;
    const int reps = 25;
    for (int r = 0; r < reps; ++r) {
      pl::Rng rng(1000 + static_cast<uint64_t>(r));
      const auto sampled = pl::sample_design(chol, n, rng);
      const double lambda = 0.9 * std::sqrt(std::log(100.0) / n);
      const auto report = pl::condition_t_check(sampled.design, cv, lambda);
      const auto m4 = pl::m4_magnitudes(sampled.design, cv, report.a_lambda,
                                        report.s_star);
      CHECK(m4.weak_sup <= 0.1 + 1e-12);
      CHECK(m4.tail_norm >= 0.0);
      tail += m4.tail_norm;
    }
    tail /= reps;
    CHECK(tail > 0.0);
    CHECK(tail < last);
    last = tail;
  }
}

TEST_CASE("lindeberg ratios stay in (0, 1] and match dense algebra") {
  pl::Rng rng(17);
  const int n = 64, p = 5;
  const auto design = pl::DesignMatrix::checked(hadamard_design(n, p));
  const auto active = pl::SelectedSet::from_indices({0, 2}, p);

  const double w = pl::lindeberg_ratio(design, active, 2, pl::LindebergMode::W);
  // Orthonormal columns: r is x_j / n, so the ratio is that of x_j itself.
  const pl::Vector xj = design.x().col(2);
  CHECK(w == doctest::Approx(xj.lpNorm<Eigen::Infinity>() / xj.norm())
                 .epsilon(1e-10));

  for (int j = 0; j < p; ++j) {
    const double s =
        pl::lindeberg_ratio(design, active, j, pl::LindebergMode::S);
    CHECK(s > 0.0);
    CHECK(s <= 1.0 + 1e-12);
  }
  CHECK_THROWS_AS(
      pl::lindeberg_ratio(design, active, 1, pl::LindebergMode::W),
      pl::Error);
}

TEST_CASE("lindeberg S-mode ratio decreases with n on Gaussian designs") {
  pl::Rng rng(19);
  double last = 1.0;
  for (int n : {100, 400, 1600}) {
    const auto design =
        pl::DesignMatrix::checked(random_standardized(n, 4, rng));
    const auto active = pl::SelectedSet::from_indices({0, 1}, 4);
    double mean = 0.0;
    for (int j = 0; j < 4; ++j) {
      mean += pl::lindeberg_ratio(design, active, j, pl::LindebergMode::S);
    }
    mean /= 4.0;
    CHECK(mean < last);
    last = mean;
  }
}
