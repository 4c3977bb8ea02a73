// Shared helpers for the unit suites: seeded random states and small
// comparison utilities. All randomness flows through qmclab::Rng so every
// test is reproducible from the literal seeds in the test bodies.
#pragma once

#include <cmath>
#include <complex>

#include "qmclab/qstate.hpp"
#include "qmclab/rng.hpp"

namespace qmtest {

// Haar-random pure qubit: four i.i.d. Gaussians, normalized.
inline qmclab::PureQubit haar_pure(qmclab::Rng& rng) {
  const qmclab::complexd a(rng.next_gaussian(), rng.next_gaussian());
  const qmclab::complexd b(rng.next_gaussian(), rng.next_gaussian());
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  return qmclab::PureQubit(a / n, b / n);
}

// Random mixed state, uniform over the Bloch ball.
inline qmclab::DensityMatrix random_density(qmclab::Rng& rng) {
  double x, y, z;
  do {
    x = 2.0 * rng.next_double() - 1.0;
    y = 2.0 * rng.next_double() - 1.0;
    z = 2.0 * rng.next_double() - 1.0;
  } while (x * x + y * y + z * z > 1.0);
  return qmclab::density_from_pauli_expectations(x, y, z);
}

inline double max_abs_diff(const qmclab::Mat2& a, const qmclab::Mat2& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a.e[i] - b.e[i]));
  return m;
}

}  // namespace qmtest
