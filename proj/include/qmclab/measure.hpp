// Born-rule sampling of polarization and Pauli measurements with explicit
// copy-budget accounting. The budget is the resource that defines measurement
// complexity: every sampling call charges it before drawing.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qmclab/qstate.hpp"

namespace qmclab {

class budget_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Count of state copies consumed by an experiment; optionally capped.
// Single-owner mutable state: one budget per trial, never shared.
class CopyBudget {
 public:
  CopyBudget() = default;
  explicit CopyBudget(std::uint64_t limit) : limit_(limit) {}

  std::uint64_t consumed() const { return consumed_; }
  std::optional<std::uint64_t> limit() const { return limit_; }

  // Throws budget_error naming the overspending strategy.
  void charge(std::uint64_t n, std::string_view strategy);

 private:
  std::uint64_t consumed_ = 0;
  std::optional<std::uint64_t> limit_;
};

struct OutcomeCounts {
  std::uint64_t n_pass = 0;
  std::uint64_t n_fail = 0;
  double basis_angle = 0.0;
};

enum class PauliAxis { x, y, z };

// |<phi(basis)|state>|^2 with |phi(b)> = (cos b, sin b); equals cos^2(k-b)
// for a linear state at angle k.
double born_probability(const PureQubit& state, double basis_angle);

// n projective measurements in the linear basis at basis_angle. Charges the
// budget by exactly n; identical seeds give identical counts.
OutcomeCounts sample_polarization(const PureQubit& state, double basis_angle,
                                  std::uint64_t n, std::uint64_t rng_seed,
                                  CopyBudget& budget);

// n measurements of sigma_axis; +1 outcome probability (1 + tr(sigma rho))/2.
OutcomeCounts sample_pauli(const DensityMatrix& rho, PauliAxis axis,
                           std::uint64_t n, std::uint64_t rng_seed,
                           CopyBudget& budget);

}  // namespace qmclab
