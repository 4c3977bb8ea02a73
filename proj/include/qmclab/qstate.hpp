// Exact single-qubit polarization algebra: pure states, density matrices,
// Pauli/Stokes operators, Uhlmann fidelity, Poincare mapping.
//
// Basis convention: |H> = (1,0), |V> = (0,1), Z|H> = +|H>. The Stokes
// operators of the single-photon polarization representation are the Pauli
// matrices in the cyclic order S0 = I, S1 = Z, S2 = X, S3 = Y, which makes
// <S1> = |a|^2-|b|^2, <S2> = 2 Re(a*b), <S3> = 2 Im(a*b) and satisfies
// [S_i, S_j] = 2i eps_ijk S_k exactly.
#pragma once

#include <array>
#include <complex>

namespace qmclab {

using complexd = std::complex<double>;

// 2x2 complex matrix, row-major.
struct Mat2 {
  std::array<complexd, 4> e{};

  complexd& operator()(int r, int c) { return e[2 * r + c]; }
  const complexd& operator()(int r, int c) const { return e[2 * r + c]; }

  static Mat2 identity() { return Mat2{{complexd(1), 0, 0, complexd(1)}}; }

  Mat2 adjoint() const;
  complexd trace() const { return e[0] + e[3]; }
  complexd det() const { return e[0] * e[3] - e[1] * e[2]; }
};

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(complexd s, const Mat2& a);

// Pauli constants: index 0 = I, 1 = X, 2 = Y, 3 = Z.
const Mat2& pauli(int i);
// Stokes operator constants: index 0 = I, 1 = Z, 2 = X, 3 = Y.
const Mat2& stokes_operator(int i);

// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian Mat2.
struct EigenSystem2 {
  std::array<double, 2> values;
  std::array<std::array<complexd, 2>, 2> vectors;  // vectors[k] belongs to values[k]
};
EigenSystem2 hermitian_eigensystem(const Mat2& m);

// Normalized amplitude pair over {|H>, |V>}.
struct PureQubit {
  complexd alpha;
  complexd beta;

  PureQubit(complexd a, complexd b);  // throws if |a|^2+|b|^2 != 1 within 1e-12
};

// Angle of a linear-polarization axis, stored reduced modulo pi into [0, pi).
class PolarizationAngle {
 public:
  explicit PolarizationAngle(double radians);
  double value() const { return k_; }

 private:
  double k_;
};

// Reduces any angle into [0, pi).
double wrap_mod_pi(double radians);
// Axis distance min(|a-b|, pi-|a-b|) after reduction mod pi.
double wrapped_angle_distance(double a, double b);

struct StokesVector {
  double s0, s1, s2, s3;
};

// 2x2 Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat2& m);  // throws std::domain_error on violation
  static DensityMatrix pure(const PureQubit& psi);

  const Mat2& matrix() const { return m_; }
  complexd operator()(int r, int c) const { return m_(r, c); }

 private:
  Mat2 m_;
};

PureQubit make_linear_polarization(PolarizationAngle k);
StokesVector stokes_parameters(const PureQubit& state);
DensityMatrix density_from_pauli_expectations(double tx, double ty, double tz);
std::array<double, 3> pauli_expectations(const DensityMatrix& rho);

// Uhlmann trace fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)) in [0, 1].
// Computed by spectral decomposition and cross-checked against the qubit
// closed form sqrt(tr(rho sigma) + 2 sqrt(det rho det sigma)).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

complexd inner_product(const PureQubit& a, const PureQubit& b);

// Equatorial Poincare angle of a state's polarization axis, in [0, pi):
// k = (1/2) atan2(<S2>, <S1>). For linear polarization this is the exact k.
double polarization_angle_of(const PureQubit& state);

}  // namespace qmclab
