#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qmclab/estimate.hpp"
#include "qmclab/experiment.hpp"
#include "qmclab/rng.hpp"
#include "test_support.hpp"

using namespace qmclab;

namespace {

constexpr double kPi = std::numbers::pi;

double bloch_angle(const TomographyResult& r) {
  return wrap_mod_pi(0.5 * std::atan2(r.expectation_estimates[0],
                                      r.expectation_estimates[2]));
}

}  // namespace

TEST_SUITE("estimate") {

TEST_CASE("tomography converges on a pure source") {
  const DensityMatrix h = DensityMatrix::pure(PureQubit(1.0, 0.0));
  CopyBudget budget;
  const TomographyResult r = pauli_tomography(h, 1000000, 808, budget);
  CHECK(r.copies_used == 3000000);
  CHECK(budget.consumed() == 3000000);
  CHECK(r.predicted_std == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(std::abs(r.expectation_estimates[2] - 1.0) <= 0.004);
  CHECK(std::abs(r.expectation_estimates[0]) <= 0.004);
  CHECK(std::abs(r.expectation_estimates[1]) <= 0.004);
  CHECK(wrapped_angle_distance(bloch_angle(r), 0.0) <= 0.01);
}

TEST_CASE("single-shot tomography returns extreme estimates") {
  const DensityMatrix mixed = density_from_pauli_expectations(0, 0, 0);
  CopyBudget budget;
  const TomographyResult r = pauli_tomography(mixed, 1, 4242, budget);
  CHECK(r.predicted_std == 1.0);
  CHECK(r.copies_used == 3);
  for (double t : r.expectation_estimates)
    CHECK(std::abs(std::abs(t) - 1.0) <= 1e-15);
  // The estimate is still a valid state: the corner of the Bloch cube is
  // projected back onto the ball.
  const auto back = pauli_expectations(r.rho_hat);
  const double norm = std::sqrt(back[0] * back[0] + back[1] * back[1] +
                                back[2] * back[2]);
  CHECK(norm <= 1.0 + 1e-9);

  CHECK_THROWS_AS(pauli_tomography(mixed, 0, 1, budget), std::invalid_argument);
}

TEST_CASE("tomography spread matches the predicted one over sqrt m") {
  const DensityMatrix mixed = density_from_pauli_expectations(0, 0, 0);
  const std::uint64_t m = 10000;
  const int repeats = 200;
  std::array<double, 3> sum{}, sum_sq{};
  for (int rep = 0; rep < repeats; ++rep) {
    CopyBudget budget;
    const TomographyResult r =
        pauli_tomography(mixed, m, derive_seed(909, static_cast<std::uint64_t>(rep), 0), budget);
    for (int a = 0; a < 3; ++a) {
      sum[static_cast<std::size_t>(a)] += r.expectation_estimates[static_cast<std::size_t>(a)];
      sum_sq[static_cast<std::size_t>(a)] +=
          r.expectation_estimates[static_cast<std::size_t>(a)] *
          r.expectation_estimates[static_cast<std::size_t>(a)];
    }
  }
  for (int a = 0; a < 3; ++a) {
    const double mean = sum[static_cast<std::size_t>(a)] / repeats;
    const double var = sum_sq[static_cast<std::size_t>(a)] / repeats - mean * mean;
    const double std_dev = std::sqrt(std::max(var, 0.0));
    CHECK(std::abs(mean) <= 0.004);
    CHECK(std_dev / 0.01 >= 0.9);
    CHECK(std_dev / 0.01 <= 1.1);
  }
}

TEST_CASE("tomography error shrinks with the shot count") {
  Rng rng(910);
  const DensityMatrix rho = qmtest::random_density(rng);
  const auto truth = pauli_expectations(rho);
  std::vector<double> errs;
  for (std::uint64_t m : {100ULL, 1000000ULL}) {
    double worst = 0.0;
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      CopyBudget budget;
      const TomographyResult r =
          pauli_tomography(rho, m, derive_seed(911, m, rep), budget);
      double err = 0.0;
      for (int a = 0; a < 3; ++a)
        err = std::max(err, std::abs(r.expectation_estimates[static_cast<std::size_t>(a)] -
                                     truth[static_cast<std::size_t>(a)]));
      worst = std::max(worst, err);
    }
    errs.push_back(worst);
  }
  CHECK(errs[1] < errs[0]);
}

TEST_CASE("bisection follows the worked half-interval examples") {
  const auto oracle = make_half_interval_oracle(kPi / 3);

  const BinGrid one = bisection_search(oracle, 1);
  CHECK(one.m == 1);
  CHECK(one.bin_index == 0);
  CHECK(one.bin_width == std::ldexp(kPi, -1));

  const BinGrid three = bisection_search(oracle, 3);
  CHECK(three.bin_index == 2);
  CHECK(three.bin_width == std::ldexp(kPi, -3));
  CHECK(kPi / 3 >= 2 * three.bin_width);
  CHECK(kPi / 3 < 3 * three.bin_width);

  CHECK_THROWS_AS(bisection_search(oracle, 0), std::invalid_argument);
  CHECK_THROWS_AS(bisection_search(oracle, 64), std::invalid_argument);
}

TEST_CASE("bisection always certifies a containing bin of exact width") {
  Rng rng(912);
  for (int t = 0; t < 2000; ++t) {
    const double k = kPi * rng.next_double();
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.next_u64() % 20);
    const BinGrid bin = bisection_search(make_half_interval_oracle(k), m);
    CHECK(bin.bin_width == std::ldexp(kPi, -static_cast<int>(m)));
    CHECK(bin.bin_index < (1ULL << m));
    const double lo = static_cast<double>(bin.bin_index) * bin.bin_width;
    CHECK(k >= lo);
    CHECK(k < lo + bin.bin_width);
  }
}

TEST_CASE("mle recovers the hidden angle from two bases") {
  for (double k : {0.0, kPi / 4, 3.1}) {
    const PureQubit psi = make_linear_polarization(PolarizationAngle(k));
    CopyBudget budget;
    const MleEstimate e = mle_polarization(psi, 10000, 913, budget);
    CHECK(e.copies_used == 10000);
    CHECK(budget.consumed() == 10000);
    CHECK(wrapped_angle_distance(e.k_hat.value(), k) <= 0.05);
  }

  CopyBudget budget;
  const PureQubit psi = make_linear_polarization(PolarizationAngle(1.0));
  CHECK_THROWS_AS(mle_polarization(psi, 1, 1, budget), std::invalid_argument);
  CopyBudget capped(10);
  CHECK_THROWS_AS(mle_polarization(psi, 100, 1, capped), budget_error);
}

TEST_CASE("mle error follows the standard quantum limit") {
  std::vector<double> ns = {100, 1000, 10000};
  std::vector<double> rms;
  const int trials = 100;
  for (double nd : ns) {
    const auto n = static_cast<std::uint64_t>(nd);
    double ss = 0.0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t seed = derive_seed(914, n, static_cast<std::uint64_t>(t));
      const double k = kPi * Rng(derive_seed(seed, 0, 0)).next_double();
      const PureQubit psi = make_linear_polarization(PolarizationAngle(k));
      CopyBudget budget;
      const MleEstimate e =
          mle_polarization(psi, n, derive_seed(seed, 1, 0), budget);
      const double err = wrapped_angle_distance(e.k_hat.value(), k);
      ss += err * err;
    }
    rms.push_back(std::sqrt(ss / trials));
  }
  const LogLogFit fit = fit_loglog(ns, rms);
  CHECK(fit.slope >= -0.65);
  CHECK(fit.slope <= -0.35);
  CHECK(rms[2] < rms[0]);
}

TEST_CASE("uncertainty products trace m pi over 2^m") {
  const UncertaintyPoint one = uncertainty_product(1);
  CHECK(one.product == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(one.delta_n == 1.0);
  CHECK(one.delta_k == std::ldexp(kPi, -1));

  CHECK(uncertainty_product(2).product == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(uncertainty_product(10).product ==
        doctest::Approx(10 * kPi / 1024).epsilon(1e-15));
  CHECK(uncertainty_product(60).product < 1e-15);

  double prev = uncertainty_product(2).product;
  for (std::uint32_t m = 3; m <= 120; ++m) {
    const UncertaintyPoint pt = uncertainty_product(m);
    CHECK(pt.product < prev);
    CHECK(pt.product == doctest::Approx(m * std::ldexp(kPi, -static_cast<int>(m)))
                            .epsilon(1e-14));
    prev = pt.product;
  }
  CHECK(prev < 1e-30);
  CHECK_THROWS_AS(uncertainty_product(0), std::invalid_argument);
}

TEST_CASE("estimator trial errors respect each strategy's contract") {
  CHECK(estimator_trial_error(EstimatorKind::exact_oracle, 1.0, 1, 5) <= 1e-12);
  CHECK(estimator_trial_error(EstimatorKind::bisection, 1.0, 5, 5) ==
        std::ldexp(kPi, -5));
  const double mle_err =
      estimator_trial_error(EstimatorKind::mle, 0.7, 400, 6);
  CHECK(mle_err >= 0.0);
  CHECK(mle_err <= kPi / 2);
  const double tomo_err =
      estimator_trial_error(EstimatorKind::tomography, 0.7, 300, 7);
  CHECK(tomo_err >= 0.0);
  CHECK(tomo_err <= kPi / 2);
  CHECK_THROWS_AS(estimator_trial_error(EstimatorKind::mle, 0.7, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("complexity profile of the ideal strategies") {
  const std::vector<double> targets = {kPi / 2, kPi / 4, kPi / 16, kPi / 1024};
  const auto oracle_curve =
      complexity_profile(EstimatorKind::exact_oracle, targets, 5, 20);
  REQUIRE(oracle_curve.size() == 4);
  for (const auto& pt : oracle_curve) {
    CHECK(pt.min_copies == 1);
    CHECK(!pt.saturated);
    CHECK(pt.median_error <= 1e-12);
  }

  const auto bisection_curve =
      complexity_profile(EstimatorKind::bisection, targets, 5, 21);
  CHECK(bisection_curve[0].min_copies == 1);
  CHECK(bisection_curve[1].min_copies == 2);
  CHECK(bisection_curve[2].min_copies == 4);
  CHECK(bisection_curve[3].min_copies == 10);
  for (const auto& pt : bisection_curve) CHECK(!pt.saturated);
}

TEST_CASE("complexity profile grows as targets tighten") {
  const std::vector<double> targets = {0.3, 0.1};
  const auto curve = complexity_profile(EstimatorKind::mle, targets, 10, 22);
  REQUIRE(curve.size() == 2);
  CHECK(curve[0].min_copies >= 2);
  CHECK(curve[1].min_copies >= curve[0].min_copies);
  for (const auto& pt : curve) {
    CHECK(!pt.saturated);
    CHECK(pt.median_error <= pt.target);
  }
}

TEST_CASE("complexity profile reports saturation at the copy cap") {
  ComplexityOptions options;
  options.copy_cap = 100;
  options.oracle_sigma = 0.3;
  const auto curve = complexity_profile(EstimatorKind::probabilistic_oracle,
                                        {0.001}, 9, 23, options);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0].saturated);
  CHECK(curve[0].min_copies == 100);
  CHECK(curve[0].median_error > 0.001);

  CHECK_THROWS_AS(complexity_profile(EstimatorKind::mle, {}, 5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(complexity_profile(EstimatorKind::mle, {0.1, 0.2}, 5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(complexity_profile(EstimatorKind::mle, {0.1}, 0, 1),
                  std::invalid_argument);
}

}  // TEST_SUITE
