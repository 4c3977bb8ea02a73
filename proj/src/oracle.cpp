#include "qmclab/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmclab/rng.hpp"

namespace qmclab {

OracleAnswer exact_oracle(const PureQubit& true_state, CopyBudget& budget) {
  budget.charge(1, "exact_oracle");
  return OracleAnswer{PolarizationAngle(polarization_angle_of(true_state)), 1,
                      true};
}

OracleAnswer probabilistic_oracle(const PureQubit& true_state, double sigma,
                                  std::uint64_t rng_seed, CopyBudget& budget) {
  if (sigma < 0.0)
    throw std::invalid_argument("probabilistic_oracle: sigma must be >= 0");
  budget.charge(1, "probabilistic_oracle");
  const double k = polarization_angle_of(true_state);
  if (sigma == 0.0) return OracleAnswer{PolarizationAngle(k), 1, true};
  Rng rng(rng_seed);
  return OracleAnswer{PolarizationAngle(k + sigma * rng.next_gaussian()), 1,
                      false};
}

VerifyResult verify_claim(const PureQubit& true_state,
                          PolarizationAngle claimed_k, std::uint64_t m,
                          std::uint64_t rng_seed, CopyBudget& budget) {
  if (m == 0) throw std::invalid_argument("verify_claim: m must be >= 1");
  const OutcomeCounts counts =
      sample_polarization(true_state, claimed_k.value(), m, rng_seed, budget);
  return VerifyResult{counts.n_pass == m,
                      1.0 - std::ldexp(1.0, -static_cast<int>(m))};
}

QueryState query_oracle_apply(const std::unordered_set<std::string>& member_set,
                              const QueryState& input,
                              const PhaseTable& phases) {
  if (input.y != 0 && input.y != 1)
    throw std::invalid_argument("query_oracle_apply: y must be 0 or 1");
  for (char c : input.x)
    if (c != '0' && c != '1')
      throw std::invalid_argument("query_oracle_apply: x must be a bit-string");
  for (const std::string& member : member_set)
    if (member.size() != input.x.size())
      throw std::invalid_argument(
          "query_oracle_apply: bit-string length mismatch with member set");

  const int f = member_set.count(input.x) ? 1 : 0;

  double phi = 0.0;
  if (const auto it = phases.find(input.x); it != phases.end())
    phi = it->second[static_cast<std::size_t>(input.y)];

  const double two_pi = 2.0 * std::numbers::pi;
  double phase = std::fmod(input.phase + phi, two_pi);
  if (phase < 0.0) phase += two_pi;

  return QueryState{input.x, input.y ^ f, phase};
}

}  // namespace qmclab
