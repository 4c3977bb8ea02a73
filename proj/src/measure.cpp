#include "qmclab/measure.hpp"

#include <cmath>

#include "qmclab/rng.hpp"

namespace qmclab {

void CopyBudget::charge(std::uint64_t n, std::string_view strategy) {
  if (limit_ && consumed_ + n > *limit_)
    throw budget_error("copy budget exhausted by strategy '" +
                       std::string(strategy) + "': requested " +
                       std::to_string(n) + " with " +
                       std::to_string(*limit_ - consumed_) + " of " +
                       std::to_string(*limit_) + " remaining");
  consumed_ += n;
}

double born_probability(const PureQubit& state, double basis_angle) {
  const complexd amp = std::cos(basis_angle) * state.alpha +
                       std::sin(basis_angle) * state.beta;
  return std::norm(amp);
}

namespace {

OutcomeCounts count_bernoulli(double p_pass, double basis_angle,
                              std::uint64_t n, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  OutcomeCounts counts;
  counts.basis_angle = basis_angle;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (rng.next_double() < p_pass)
      ++counts.n_pass;
    else
      ++counts.n_fail;
  }
  return counts;
}

}  // namespace

OutcomeCounts sample_polarization(const PureQubit& state, double basis_angle,
                                  std::uint64_t n, std::uint64_t rng_seed,
                                  CopyBudget& budget) {
  budget.charge(n, "sample_polarization");
  return count_bernoulli(born_probability(state, basis_angle), basis_angle, n,
                         rng_seed);
}

OutcomeCounts sample_pauli(const DensityMatrix& rho, PauliAxis axis,
                           std::uint64_t n, std::uint64_t rng_seed,
                           CopyBudget& budget) {
  budget.charge(n, "sample_pauli");
  const int pauli_index = axis == PauliAxis::x ? 1 : axis == PauliAxis::y ? 2 : 3;
  const double t = (pauli(pauli_index) * rho.matrix()).trace().real();
  return count_bernoulli(0.5 * (1.0 + t), 0.0, n, rng_seed);
}

}  // namespace qmclab
