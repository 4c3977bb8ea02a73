#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "qmclab/clone.hpp"
#include "qmclab/rng.hpp"
#include "test_support.hpp"

using namespace qmclab;
using qmtest::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;
const double kOverlap = 5.0 / 6.0;
const double kTraceFidelity = std::sqrt(5.0 / 6.0);

}  // namespace

TEST_SUITE("clone") {

TEST_CASE("cloning a basis state gives the canonical mixture") {
  const CloneOutput out = bh_clone(DensityMatrix::pure(PureQubit(1.0, 0.0)));
  CHECK(std::abs(out.clone_a(0, 0) - complexd(5.0 / 6.0)) <= 1e-15);
  CHECK(std::abs(out.clone_a(1, 1) - complexd(1.0 / 6.0)) <= 1e-15);
  CHECK(std::abs(out.clone_a(0, 1)) <= 1e-15);
  CHECK(out.input_overlap_fidelity == doctest::Approx(kOverlap).epsilon(1e-14));
  CHECK(out.trace_fidelity == doctest::Approx(kTraceFidelity).epsilon(1e-10));
  CHECK(max_abs_diff(out.clone_a.matrix(), out.clone_b.matrix()) == 0.0);
}

TEST_CASE("the maximally mixed state is a fixed point") {
  const DensityMatrix mixed = density_from_pauli_expectations(0, 0, 0);
  const CloneOutput out = bh_clone(mixed);
  CHECK(max_abs_diff(out.clone_a.matrix(), mixed.matrix()) <= 1e-15);
}

TEST_CASE("overlap fidelity is universal over pure inputs") {
  Rng rng(601);
  double max_overlap_dev = 0.0, max_trace_dev = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PureQubit psi = qmtest::haar_pure(rng);
    const CloneOutput out = bh_clone(DensityMatrix::pure(psi));
    max_overlap_dev = std::max(max_overlap_dev,
                               std::abs(out.input_overlap_fidelity - kOverlap));
    max_trace_dev =
        std::max(max_trace_dev, std::abs(out.trace_fidelity - kTraceFidelity));
    CHECK(max_abs_diff(out.clone_a.matrix(), out.clone_b.matrix()) == 0.0);
  }
  CHECK(max_overlap_dev <= 1e-12);
  CHECK(max_trace_dev <= 1e-10);
}

TEST_CASE("channel preserves trace and keeps eigenvalues off the floor") {
  Rng rng(602);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = qmtest::random_density(rng);
    const CloneOutput out = bh_clone(rho);
    CHECK(std::abs(out.clone_a.matrix().trace() - complexd(1.0)) <= 1e-12);
    const EigenSystem2 sys = hermitian_eigensystem(out.clone_a.matrix());
    CHECK(sys.values[1] >= 1.0 / 6.0 - 1e-12);
  }
}

TEST_CASE("cloning shrinks every bloch vector by exactly two thirds") {
  Rng rng(603);
  for (int i = 0; i < 100; ++i) {
    const DensityMatrix rho = qmtest::random_density(rng);
    const auto before = pauli_expectations(rho);
    const auto after = pauli_expectations(bh_clone(rho).clone_a);
    for (int a = 0; a < 3; ++a)
      CHECK(std::abs(after[static_cast<std::size_t>(a)] -
                     (2.0 / 3.0) * before[static_cast<std::size_t>(a)]) <= 1e-12);
  }
}

TEST_CASE("fidelity never decreases under simultaneous cloning") {
  Rng rng(604);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = qmtest::random_density(rng);
    const DensityMatrix sigma = qmtest::random_density(rng);
    const double before = fidelity(rho, sigma);
    const double after = fidelity(bh_clone(rho).clone_a, bh_clone(sigma).clone_a);
    CHECK(after >= before - 1e-10);
  }
}

TEST_CASE("clone-then-tomograph recovers the input after de-shrinking") {
  const PureQubit h = make_linear_polarization(PolarizationAngle(0.0));
  CopyBudget budget;
  const std::uint64_t m = 100000;
  const TomographyResult r = clone_then_tomograph(h, 3 * m, m, 605, budget);
  CHECK(budget.consumed() == 1);  // only the original copy is charged
  CHECK(r.copies_used == 3 * m);  // clone shots are recorded separately
  CHECK(std::abs(r.expectation_estimates[2] - 1.0) <= 0.02);
  CHECK(std::abs(r.expectation_estimates[0]) <= 0.02);

  const PureQubit d = make_linear_polarization(PolarizationAngle(kPi / 4));
  CopyBudget budget2;
  const TomographyResult rd = clone_then_tomograph(d, 3 * m, m, 606, budget2);
  const double k_hat = wrap_mod_pi(
      0.5 * std::atan2(rd.expectation_estimates[0], rd.expectation_estimates[2]));
  CHECK(wrapped_angle_distance(k_hat, kPi / 4) <= 0.02);
  CHECK(budget2.consumed() == 1);
}

TEST_CASE("clone budget must cover the requested shots") {
  const PureQubit h = make_linear_polarization(PolarizationAngle(0.0));
  CopyBudget budget;
  CHECK_THROWS_AS(clone_then_tomograph(h, 299, 100, 1, budget),
                  std::invalid_argument);
  CHECK_NOTHROW(clone_then_tomograph(h, 300, 100, 1, budget));
}

}  // TEST_SUITE
