#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "qmclab/measure.hpp"
#include "qmclab/qstate.hpp"
#include "qmclab/rng.hpp"
#include "test_support.hpp"

using namespace qmclab;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("born probabilities for linear states are cos^2(k - b)") {
  const PureQubit h = make_linear_polarization(PolarizationAngle(0.0));
  CHECK(born_probability(h, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

  const PureQubit v = make_linear_polarization(PolarizationAngle(kPi / 2));
  CHECK(born_probability(v, 0.0) <= 1e-12);

  const PureQubit d = make_linear_polarization(PolarizationAngle(kPi / 4));
  CHECK(born_probability(d, 0.0) == doctest::Approx(0.5).epsilon(1e-14));

  Rng rng(301);
  for (int i = 0; i < 100; ++i) {
    const double k = kPi * rng.next_double();
    const double b = kPi * rng.next_double();
    const PureQubit psi = make_linear_polarization(PolarizationAngle(k));
    const double c = std::cos(k - b);
    CHECK(std::abs(born_probability(psi, b) - c * c) <= 1e-12);
  }

  // Circular polarization meets every linear basis at probability 1/2.
  const double r = 1.0 / std::sqrt(2.0);
  const PureQubit circ(r, complexd(0.0, r));
  for (double b : {0.0, 0.3, kPi / 4, 1.9})
    CHECK(born_probability(circ, b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("deterministic outcomes charge the budget exactly") {
  const PureQubit h = make_linear_polarization(PolarizationAngle(0.0));
  CopyBudget budget;

  const OutcomeCounts aligned = sample_polarization(h, 0.0, 1000, 42, budget);
  CHECK(aligned.n_pass == 1000);
  CHECK(aligned.n_fail == 0);
  CHECK(aligned.basis_angle == 0.0);
  CHECK(budget.consumed() == 1000);

  const OutcomeCounts empty = sample_polarization(h, 0.3, 0, 42, budget);
  CHECK(empty.n_pass == 0);
  CHECK(empty.n_fail == 0);
  CHECK(budget.consumed() == 1000);

  const PureQubit v = make_linear_polarization(PolarizationAngle(kPi / 2));
  const OutcomeCounts orthogonal = sample_polarization(v, 0.0, 500, 7, budget);
  CHECK(orthogonal.n_pass == 0);
  CHECK(orthogonal.n_fail == 500);
  CHECK(budget.consumed() == 1500);
}

TEST_CASE("identical seeds reproduce identical counts") {
  const PureQubit d = make_linear_polarization(PolarizationAngle(kPi / 4));
  CopyBudget b1, b2;
  const OutcomeCounts first = sample_polarization(d, 0.1, 5000, 99, b1);
  const OutcomeCounts second = sample_polarization(d, 0.1, 5000, 99, b2);
  CHECK(first.n_pass == second.n_pass);
  CHECK(first.n_fail == second.n_fail);
  CHECK(first.n_pass + first.n_fail == 5000);
}

TEST_CASE("pass frequencies concentrate at the born probability") {
  const PureQubit d = make_linear_polarization(PolarizationAngle(kPi / 4));
  CopyBudget budget;
  const OutcomeCounts c = sample_polarization(d, 0.0, 10000, 1234, budget);
  const double frac = static_cast<double>(c.n_pass) / 10000.0;
  CHECK(std::abs(frac - 0.5) <= 0.02);

  // 4-sigma binomial window across three decades of n, fixed seeds.
  Rng rng(302);
  for (std::uint64_t n : {100ULL, 1000ULL, 10000ULL}) {
    const double k = kPi * rng.next_double();
    const PureQubit psi = make_linear_polarization(PolarizationAngle(k));
    const double p = born_probability(psi, 0.0);
    CopyBudget b;
    const OutcomeCounts counts =
        sample_polarization(psi, 0.0, n, 5000 + n, b);
    const double emp = static_cast<double>(counts.n_pass) / static_cast<double>(n);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    CHECK(std::abs(emp - p) <= 4.0 * sigma + 1e-12);
  }
}

TEST_CASE("pauli sampling matches the expectation rule") {
  const DensityMatrix h = DensityMatrix::pure(PureQubit(1.0, 0.0));
  CopyBudget budget;

  const OutcomeCounts z = sample_pauli(h, PauliAxis::z, 100, 11, budget);
  CHECK(z.n_pass == 100);
  CHECK(budget.consumed() == 100);

  const DensityMatrix mixed = density_from_pauli_expectations(0.0, 0.0, 0.0);
  for (PauliAxis axis : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
    CopyBudget b;
    const OutcomeCounts c = sample_pauli(mixed, axis, 10000, 21, b);
    const double frac = static_cast<double>(c.n_pass) / 10000.0;
    CHECK(std::abs(frac - 0.5) <= 0.02);
  }

  CopyBudget bx;
  const OutcomeCounts x = sample_pauli(h, PauliAxis::x, 10000, 31, bx);
  const double mean =
      (static_cast<double>(x.n_pass) - static_cast<double>(x.n_fail)) / 10000.0;
  CHECK(std::abs(mean) <= 0.03);

  Rng rng(303);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix rho = qmtest::random_density(rng);
    const auto t = pauli_expectations(rho);
    const PauliAxis axis = static_cast<PauliAxis>(i % 3);
    const double p = 0.5 * (1.0 + t[static_cast<std::size_t>(i % 3)]);
    CopyBudget b;
    const OutcomeCounts c = sample_pauli(rho, axis, 4000, 400 + i, b);
    const double emp = static_cast<double>(c.n_pass) / 4000.0;
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / 4000.0);
    CHECK(std::abs(emp - p) <= 4.0 * sigma + 1e-3);
  }
}

TEST_CASE("budget limit blocks overspending and names the strategy") {
  CopyBudget budget(100);
  const PureQubit h = make_linear_polarization(PolarizationAngle(0.0));
  sample_polarization(h, 0.0, 60, 1, budget);
  CHECK(budget.consumed() == 60);
  CHECK(budget.limit().value() == 100);

  CHECK_THROWS_AS(sample_polarization(h, 0.0, 60, 2, budget), budget_error);
  CHECK(budget.consumed() == 60);  // failed charge consumes nothing

  try {
    sample_polarization(h, 0.0, 60, 2, budget);
    FAIL("expected budget_error");
  } catch (const budget_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("sample_polarization") != std::string::npos);
    CHECK(msg.find("requested 60") != std::string::npos);
    CHECK(msg.find("40") != std::string::npos);
  }

  sample_polarization(h, 0.0, 40, 3, budget);
  CHECK(budget.consumed() == 100);
  CHECK_THROWS_AS(sample_polarization(h, 0.0, 1, 4, budget), budget_error);
}

TEST_CASE("budget accumulates every call") {
  CopyBudget budget;
  const PureQubit d = make_linear_polarization(PolarizationAngle(kPi / 4));
  const DensityMatrix rho = DensityMatrix::pure(d);
  std::uint64_t expected = 0;
  Rng rng(304);
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t n = rng.next_u64() % 200;
    if (i % 2 == 0)
      sample_polarization(d, 0.2, n, 600 + i, budget);
    else
      sample_pauli(rho, PauliAxis::y, n, 600 + i, budget);
    expected += n;
  }
  CHECK(budget.consumed() == expected);
}

}  // TEST_SUITE
