#include "qmclab/clone.hpp"

#include <cmath>
#include <stdexcept>

#include "qmclab/measure.hpp"

namespace qmclab {

CloneOutput bh_clone(const DensityMatrix& rho_in) {
  const Mat2 out_m = complexd(2.0 / 3.0) * rho_in.matrix() +
                     complexd(1.0 / 6.0) * Mat2::identity();
  const DensityMatrix out(out_m);
  const double overlap = (rho_in.matrix() * out_m).trace().real();
  const double trace_f = fidelity(rho_in, out);
  return CloneOutput{out, out, overlap, trace_f};
}

TomographyResult clone_then_tomograph(const PureQubit& true_state,
                                      std::uint64_t n_clones,
                                      std::uint64_t m_per_axis,
                                      std::uint64_t rng_seed,
                                      CopyBudget& budget) {
  if (n_clones < 3 * m_per_axis)
    throw std::invalid_argument(
        "clone_then_tomograph: n_clones must cover 3 * m_per_axis shots");
  budget.charge(1, "clone_then_tomograph");

  const CloneOutput clones = bh_clone(DensityMatrix::pure(true_state));
  CopyBudget clone_budget(n_clones);
  TomographyResult res =
      pauli_tomography(clones.clone_a, m_per_axis, rng_seed, clone_budget);

  // Undo the cloner's 2/3 shrinking factor, then re-project into the ball.
  std::array<double, 3> t = res.expectation_estimates;
  for (double& ti : t) ti *= 1.5;
  const double r = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
  if (r > 1.0)
    for (double& ti : t) ti /= r;

  res.expectation_estimates = t;
  res.rho_hat = density_from_pauli_expectations(t[0], t[1], t[2]);
  return res;
}

}  // namespace qmclab
