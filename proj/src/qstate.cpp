#include "qmclab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmclab {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenFloor = -1e-10;

}  // namespace

Mat2 Mat2::adjoint() const {
  Mat2 r;
  r.e[0] = std::conj(e[0]);
  r.e[1] = std::conj(e[2]);
  r.e[2] = std::conj(e[1]);
  r.e[3] = std::conj(e[3]);
  return r;
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e[i] = a.e[i] + b.e[i];
  return r;
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e[i] = a.e[i] - b.e[i];
  return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  r.e[0] = a.e[0] * b.e[0] + a.e[1] * b.e[2];
  r.e[1] = a.e[0] * b.e[1] + a.e[1] * b.e[3];
  r.e[2] = a.e[2] * b.e[0] + a.e[3] * b.e[2];
  r.e[3] = a.e[2] * b.e[1] + a.e[3] * b.e[3];
  return r;
}

Mat2 operator*(complexd s, const Mat2& a) {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e[i] = s * a.e[i];
  return r;
}

const Mat2& pauli(int i) {
  static const std::array<Mat2, 4> kPauli = {
      Mat2::identity(),
      Mat2{{0, complexd(1), complexd(1), 0}},
      Mat2{{0, complexd(0, -1), complexd(0, 1), 0}},
      Mat2{{complexd(1), 0, 0, complexd(-1)}},
  };
  if (i < 0 || i > 3) throw std::invalid_argument("pauli: index must be 0..3");
  return kPauli[static_cast<std::size_t>(i)];
}

const Mat2& stokes_operator(int i) {
  if (i < 0 || i > 3)
    throw std::invalid_argument("stokes_operator: index must be 0..3");
  static const std::array<int, 4> kPauliIndex = {0, 3, 1, 2};
  return pauli(kPauliIndex[static_cast<std::size_t>(i)]);
}

EigenSystem2 hermitian_eigensystem(const Mat2& m) {
  const double a = m.e[0].real();
  const double d = m.e[3].real();
  const complexd b = m.e[1];
  const double half_tr = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double disc = std::sqrt(half_diff * half_diff + std::norm(b));
  EigenSystem2 sys;
  sys.values = {half_tr + disc, half_tr - disc};

  if (disc < 1e-300) {
    sys.vectors = {{{complexd(1), complexd(0)}, {complexd(0), complexd(1)}}};
    return sys;
  }

  for (int k = 0; k < 2; ++k) {
    const double lambda = sys.values[static_cast<std::size_t>(k)];
    // (m - lambda I) v = 0; pick the better-conditioned row.
    complexd v0, v1;
    if (std::abs(a - lambda) >= std::abs(d - lambda)) {
      v0 = b;
      v1 = complexd(lambda - a);
    } else {
      v0 = complexd(lambda - d);
      v1 = std::conj(b);
    }
    double n = std::sqrt(std::norm(v0) + std::norm(v1));
    if (n < 1e-300) {
      v0 = (k == 0) ? complexd(1) : complexd(0);
      v1 = (k == 0) ? complexd(0) : complexd(1);
      n = 1.0;
    }
    sys.vectors[static_cast<std::size_t>(k)] = {v0 / n, v1 / n};
  }
  return sys;
}

PureQubit::PureQubit(complexd a, complexd b) : alpha(a), beta(b) {
  const double n = std::norm(a) + std::norm(b);
  if (std::abs(n - 1.0) > 1e-12)
    throw std::invalid_argument("PureQubit: amplitudes must be normalized");
}

PolarizationAngle::PolarizationAngle(double radians)
    : k_(wrap_mod_pi(radians)) {}

double wrap_mod_pi(double radians) {
  if (!std::isfinite(radians))
    throw std::invalid_argument("wrap_mod_pi: angle must be finite");
  double k = std::fmod(radians, std::numbers::pi);
  if (k < 0.0) k += std::numbers::pi;
  if (k >= std::numbers::pi) k = 0.0;
  return k;
}

double wrapped_angle_distance(double a, double b) {
  const double d = std::abs(wrap_mod_pi(a) - wrap_mod_pi(b));
  return std::min(d, std::numbers::pi - d);
}

DensityMatrix::DensityMatrix(const Mat2& m) : m_(m) {
  if (std::abs(m.e[0].imag()) > kHermitianTol ||
      std::abs(m.e[3].imag()) > kHermitianTol ||
      std::abs(m.e[1] - std::conj(m.e[2])) > kHermitianTol)
    throw std::domain_error("DensityMatrix: matrix is not Hermitian");
  if (std::abs(m.trace() - complexd(1.0)) > kTraceTol)
    throw std::domain_error("DensityMatrix: trace must be 1");
  const auto sys = hermitian_eigensystem(m);
  if (sys.values[1] < kEigenFloor)
    throw std::domain_error("DensityMatrix: matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const PureQubit& psi) {
  Mat2 m;
  m.e[0] = psi.alpha * std::conj(psi.alpha);
  m.e[1] = psi.alpha * std::conj(psi.beta);
  m.e[2] = psi.beta * std::conj(psi.alpha);
  m.e[3] = psi.beta * std::conj(psi.beta);
  return DensityMatrix(m);
}

PureQubit make_linear_polarization(PolarizationAngle k) {
  return PureQubit(std::cos(k.value()), std::sin(k.value()));
}

StokesVector stokes_parameters(const PureQubit& state) {
  const complexd cross = std::conj(state.alpha) * state.beta;
  return StokesVector{
      1.0,
      std::norm(state.alpha) - std::norm(state.beta),
      2.0 * cross.real(),
      2.0 * cross.imag(),
  };
}

DensityMatrix density_from_pauli_expectations(double tx, double ty,
                                              double tz) {
  Mat2 m;
  m.e[0] = complexd(0.5 * (1.0 + tz));
  m.e[1] = complexd(0.5 * tx, -0.5 * ty);
  m.e[2] = complexd(0.5 * tx, 0.5 * ty);
  m.e[3] = complexd(0.5 * (1.0 - tz));
  return DensityMatrix(m);
}

std::array<double, 3> pauli_expectations(const DensityMatrix& rho) {
  std::array<double, 3> t;
  for (int i = 1; i <= 3; ++i)
    t[static_cast<std::size_t>(i - 1)] = (pauli(i) * rho.matrix()).trace().real();
  return t;
}

namespace {

// Eigenvalues below kRankFloor (relative to the leading one) are rounding
// debris from rank-deficient inputs; their square roots would otherwise
// inject ~1e-9 noise, so they are treated as exact zeros.
constexpr double kRankFloor = 1e-14;

Mat2 hermitian_sqrt(const Mat2& m) {
  const auto sys = hermitian_eigensystem(m);
  const double floor = std::max(sys.values[0], 0.0) * kRankFloor;
  Mat2 r{};
  for (int k = 0; k < 2; ++k) {
    double lambda = std::max(sys.values[static_cast<std::size_t>(k)], 0.0);
    if (lambda < floor) lambda = 0.0;
    const double s = std::sqrt(lambda);
    const auto& v = sys.vectors[static_cast<std::size_t>(k)];
    r.e[0] += s * v[0] * std::conj(v[0]);
    r.e[1] += s * v[0] * std::conj(v[1]);
    r.e[2] += s * v[1] * std::conj(v[0]);
    r.e[3] += s * v[1] * std::conj(v[1]);
  }
  return r;
}

double fidelity_spectral(const Mat2& rho, const Mat2& sigma) {
  const Mat2 sr = hermitian_sqrt(rho);
  const Mat2 m = sr * sigma * sr;
  const auto sys = hermitian_eigensystem(m);
  const double floor = std::max(sys.values[0], 0.0) * kRankFloor;
  double f = 0.0;
  for (double lambda : sys.values) {
    if (lambda < 0.0) {
      if (lambda < -1e-12)
        throw std::domain_error("fidelity: inner matrix not positive semidefinite");
      lambda = 0.0;
    }
    if (lambda < floor) lambda = 0.0;
    f += std::sqrt(lambda);
  }
  return std::min(f, 1.0);
}

double fidelity_closed_form(const Mat2& rho, const Mat2& sigma) {
  const double cross = (rho * sigma).trace().real();
  double det_rho = rho.det().real();
  double det_sigma = sigma.det().real();
  if (det_rho < kRankFloor) det_rho = 0.0;
  if (det_sigma < kRankFloor) det_sigma = 0.0;
  const double f2 = cross + 2.0 * std::sqrt(det_rho * det_sigma);
  return std::sqrt(std::clamp(f2, 0.0, 1.0));
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double spectral = fidelity_spectral(rho.matrix(), sigma.matrix());
  const double closed = fidelity_closed_form(rho.matrix(), sigma.matrix());
  if (std::abs(spectral - closed) > 1e-9)
    throw std::domain_error("fidelity: spectral and closed-form routes disagree");
  return spectral;
}

complexd inner_product(const PureQubit& a, const PureQubit& b) {
  return std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta;
}

double polarization_angle_of(const PureQubit& state) {
  const StokesVector s = stokes_parameters(state);
  return wrap_mod_pi(0.5 * std::atan2(s.s2, s.s1));
}

}  // namespace qmclab
