// Universal symmetric 1->2 qubit cloner, reduced to its single-clone channel
// rho -> (2/3) rho + I/6, plus the clone-then-tomograph estimation strategy
// that undoes the known shrinking factor.
#pragma once

#include <cstdint>

#include "qmclab/estimate.hpp"
#include "qmclab/qstate.hpp"

namespace qmclab {

struct CloneOutput {
  DensityMatrix clone_a;
  DensityMatrix clone_b;          // identical to clone_a by symmetry
  double input_overlap_fidelity;  // tr(rho_in rho_clone); 5/6 for pure input
  double trace_fidelity;          // Uhlmann fidelity F(rho_in, rho_clone)
};

// Optimal universal cloning channel: both output marginals equal
// (2/3) rho + I/6.
CloneOutput bh_clone(const DensityMatrix& rho_in);

// Charges exactly 1 original copy, clones it n_clones times (each clone
// carries the shrunken marginal), then tomographs the clone ensemble with
// m_per_axis shots per axis and rescales the Bloch estimate by 3/2 to undo
// the shrinking factor. Requires n_clones >= 3 * m_per_axis clones to feed
// the shot counter; copies_used in the result counts clone shots.
TomographyResult clone_then_tomograph(const PureQubit& true_state,
                                      std::uint64_t n_clones,
                                      std::uint64_t m_per_axis,
                                      std::uint64_t rng_seed,
                                      CopyBudget& budget);

}  // namespace qmclab
