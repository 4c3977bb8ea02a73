// Measurement-oracle taxonomy: the exact and probabilistic single-copy
// oracles, the m-copy verifier, and the unitary query oracle on basis states.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "qmclab/measure.hpp"
#include "qmclab/qstate.hpp"

namespace qmclab {

// An oracle answers from a single copy; copies_charged is 1 by construction.
struct OracleAnswer {
  PolarizationAngle estimate;
  std::uint64_t copies_charged;
  bool exact;
};

// Returns the exact polarization angle (the simulator has ontic access).
OracleAnswer exact_oracle(const PureQubit& true_state, CopyBudget& budget);

// True angle plus Gaussian(0, sigma) noise, reduced mod pi. sigma = 0
// reduces exactly to the exact oracle.
OracleAnswer probabilistic_oracle(const PureQubit& true_state, double sigma,
                                  std::uint64_t rng_seed, CopyBudget& budget);

struct VerifyResult {
  bool accepted;
  double confidence;  // 1 - 2^-m, the canonical wrong-claim figure
};

// Measures m copies in the basis aligned with the claim; accepts on
// unanimous pass. A claim off by eps is falsely accepted with probability
// cos^{2m}(eps); eps = pi/4 gives the canonical 2^-m.
VerifyResult verify_claim(const PureQubit& true_state,
                          PolarizationAngle claimed_k, std::uint64_t m,
                          std::uint64_t rng_seed, CopyBudget& budget);

// Computational basis state |x, y> with an accumulated global phase.
struct QueryState {
  std::string x;      // bit-string of '0'/'1'
  int y = 0;          // target bit
  double phase = 0.0; // radians in [0, 2pi)
};

// Optional phase table phi_{x,y}; missing entries are zero.
using PhaseTable = std::unordered_map<std::string, std::array<double, 2>>;

// U|x,y> -> e^{i phi_{x,y}} |x, y xor f(x)> with f(x) = [x in member_set].
QueryState query_oracle_apply(const std::unordered_set<std::string>& member_set,
                              const QueryState& input,
                              const PhaseTable& phases);

}  // namespace qmclab
