// Truncated Fock-space numerics: harmonic-oscillator operators, coherent
// states, number/phase statistics, and a generic Heisenberg-uncertainty
// checker. Natural units hbar = m = omega = 1 throughout.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace qmclab {

using complexd = std::complex<double>;

// Dense complex square matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), e_(dim * dim) {}

  std::size_t dim() const { return dim_; }
  complexd& operator()(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }
  const complexd& operator()(std::size_t r, std::size_t c) const {
    return e_[r * dim_ + c];
  }

  CMatrix adjoint() const;
  bool is_hermitian(double tol) const;

  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(complexd s, const CMatrix& a);

  std::vector<complexd> apply(const std::vector<complexd>& v) const;

 private:
  std::size_t dim_ = 0;
  std::vector<complexd> e_;
};

enum class UnitTag { dimensionless, position, momentum, energy };

struct OperatorMatrix {
  CMatrix m;
  UnitTag units = UnitTag::dimensionless;

  std::size_t dim() const { return m.dim(); }
};

// Normalized amplitude list over the truncated number basis {|0>..|D-1>}.
struct FockVector {
  std::vector<complexd> amplitudes;

  explicit FockVector(std::vector<complexd> amps);  // enforces unit norm within 1e-9
  std::size_t dim() const { return amplitudes.size(); }

  static FockVector basis_state(std::size_t n, std::size_t dim);
};

struct UncertaintyReport {
  double delta_a = 0.0;
  double delta_b = 0.0;
  double bound = 0.0;  // (1/2)|<[A,B]>|
  bool satisfied = false;
};

struct OscillatorOperators {
  OperatorMatrix a;     // annihilation, a_{n,n+1} = sqrt(n+1)
  OperatorMatrix adag;  // creation
  OperatorMatrix n;     // number, diag(0..D-1)
  OperatorMatrix x;     // (a + a^dag)/sqrt(2)
  OperatorMatrix p;     // (a - a^dag)/(i sqrt(2))
  OperatorMatrix h;     // p^2/2 + x^2/2
};

// Coherent-state amplitudes c_n = e^{-|a0|^2/2} a0^n / sqrt(n!), renormalized
// after truncation. Throws std::domain_error when the truncation leakage
// sum_{n>=D} |c_n|^2 reaches 1e-8 (needs D >~ |a0|^2 + 8|a0|).
FockVector coherent_state(complexd alpha0, std::size_t dim);

OscillatorOperators oscillator_operators(std::size_t dim);  // dim >= 2

complexd expectation(const OperatorMatrix& op, const FockVector& psi);
double variance(const OperatorMatrix& op, const FockVector& psi);

// Robertson check Delta A * Delta B >= (1/2)|<[A,B]>| with tolerance 1e-8.
UncertaintyReport uncertainty_check(const OperatorMatrix& a,
                                    const OperatorMatrix& b,
                                    const FockVector& psi);

struct PhaseStatistics {
  double mean_phase = 0.0;   // circular mean of the discrete phase distribution
  double delta_theta = 0.0;  // std over the window (mean-pi, mean+pi]
};

// Pegg-Barnett phase distribution over D equally spaced phase states
// theta_j = 2 pi j / D, |theta_j> = D^{-1/2} sum_n e^{i n theta_j} |n>.
PhaseStatistics phase_statistics(const FockVector& psi);

// Weight in the top `levels` number states; truncation-edge guard used by
// property tests to skip states whose support reaches the cutoff.
double truncation_weight(const FockVector& psi, std::size_t levels = 4);
bool near_truncation_edge(const FockVector& psi, std::size_t levels = 4,
                          double tol = 1e-6);

}  // namespace qmclab
