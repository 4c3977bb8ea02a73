#include "qmclab/fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmclab {

namespace {

constexpr double kLeakageLimit = 1e-8;
constexpr double kUncertaintyTol = 1e-8;

}  // namespace

CMatrix CMatrix::adjoint() const {
  CMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

bool CMatrix::is_hermitian(double tol) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  CMatrix r(a.dim_);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
  return r;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  CMatrix r(a.dim_);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = a.e_[i] - b.e_[i];
  return r;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  const std::size_t d = a.dim_;
  CMatrix r(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const complexd aik = a(i, k);
      if (aik == complexd(0)) continue;
      for (std::size_t j = 0; j < d; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

CMatrix operator*(complexd s, const CMatrix& a) {
  CMatrix r(a.dim_);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = s * a.e_[i];
  return r;
}

std::vector<complexd> CMatrix::apply(const std::vector<complexd>& v) const {
  if (v.size() != dim_) throw std::invalid_argument("CMatrix: vector dimension mismatch");
  std::vector<complexd> w(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    complexd acc = 0;
    for (std::size_t j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[j];
    w[i] = acc;
  }
  return w;
}

FockVector::FockVector(std::vector<complexd> amps) : amplitudes(std::move(amps)) {
  if (amplitudes.empty())
    throw std::invalid_argument("FockVector: empty amplitude list");
  double n = 0.0;
  for (const complexd& c : amplitudes) n += std::norm(c);
  if (std::abs(n - 1.0) > 1e-9)
    throw std::invalid_argument("FockVector: amplitudes must be normalized");
}

FockVector FockVector::basis_state(std::size_t n, std::size_t dim) {
  if (n >= dim) throw std::invalid_argument("FockVector: basis index out of range");
  std::vector<complexd> amps(dim);
  amps[n] = 1.0;
  return FockVector(std::move(amps));
}

FockVector coherent_state(complexd alpha0, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("coherent_state: dim must be >= 1");
  std::vector<complexd> amps(dim);
  complexd c = std::exp(complexd(-0.5 * std::norm(alpha0)));
  double captured = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    amps[n] = c;
    captured += std::norm(c);
    c *= alpha0 / std::sqrt(static_cast<double>(n + 1));
  }
  const double leakage = 1.0 - captured;
  if (leakage >= kLeakageLimit)
    throw std::domain_error("coherent_state: truncation leakage exceeds 1e-8; increase dim");
  const double scale = 1.0 / std::sqrt(captured);
  for (complexd& a : amps) a *= scale;
  return FockVector(std::move(amps));
}

OscillatorOperators oscillator_operators(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("oscillator_operators: dim must be >= 2");
  CMatrix a(dim);
  for (std::size_t n = 0; n + 1 < dim; ++n)
    a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  const CMatrix adag = a.adjoint();

  CMatrix num(dim);
  for (std::size_t n = 0; n < dim; ++n) num(n, n) = static_cast<double>(n);

  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const CMatrix x = complexd(inv_sqrt2) * (a + adag);
  const CMatrix p = complexd(0.0, -inv_sqrt2) * (a - adag);
  const CMatrix h = complexd(0.5) * (p * p + x * x);

  return OscillatorOperators{
      {a, UnitTag::dimensionless},    {adag, UnitTag::dimensionless},
      {num, UnitTag::dimensionless},  {x, UnitTag::position},
      {p, UnitTag::momentum},         {h, UnitTag::energy},
  };
}

complexd expectation(const OperatorMatrix& op, const FockVector& psi) {
  if (op.dim() != psi.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  const std::vector<complexd> w = op.m.apply(psi.amplitudes);
  complexd acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    acc += std::conj(psi.amplitudes[i]) * w[i];
  return acc;
}

double variance(const OperatorMatrix& op, const FockVector& psi) {
  if (op.dim() != psi.dim())
    throw std::invalid_argument("variance: dimension mismatch");
  const std::vector<complexd> w = op.m.apply(psi.amplitudes);
  const std::vector<complexd> w2 = op.m.apply(w);
  complexd mean = 0, second = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    mean += std::conj(psi.amplitudes[i]) * w[i];
    second += std::conj(psi.amplitudes[i]) * w2[i];
  }
  return std::max(second.real() - std::norm(mean), 0.0);
}

UncertaintyReport uncertainty_check(const OperatorMatrix& a,
                                    const OperatorMatrix& b,
                                    const FockVector& psi) {
  if (a.dim() != psi.dim() || b.dim() != psi.dim())
    throw std::invalid_argument("uncertainty_check: dimension mismatch");
  if (!a.m.is_hermitian(1e-10) || !b.m.is_hermitian(1e-10))
    throw std::invalid_argument("uncertainty_check: operators must be Hermitian");
  UncertaintyReport rep;
  rep.delta_a = std::sqrt(variance(a, psi));
  rep.delta_b = std::sqrt(variance(b, psi));
  const CMatrix comm = a.m * b.m - b.m * a.m;
  rep.bound = 0.5 * std::abs(expectation({comm, UnitTag::dimensionless}, psi));
  rep.satisfied = rep.delta_a * rep.delta_b >= rep.bound - kUncertaintyTol;
  return rep;
}

PhaseStatistics phase_statistics(const FockVector& psi) {
  const std::size_t d = psi.dim();
  const double two_pi = 2.0 * std::numbers::pi;

  // P(theta_j) = |<theta_j|psi>|^2, theta_j = 2 pi j / D.
  std::vector<double> theta(d), prob(d);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    theta[j] = two_pi * static_cast<double>(j) / static_cast<double>(d);
    complexd inner = 0;
    for (std::size_t n = 0; n < d; ++n) {
      const double ph = -theta[j] * static_cast<double>(n);
      inner += complexd(std::cos(ph), std::sin(ph)) * psi.amplitudes[n];
    }
    prob[j] = std::norm(inner) / static_cast<double>(d);
    total += prob[j];
  }
  for (double& pj : prob) pj /= total;

  complexd z = 0;
  for (std::size_t j = 0; j < d; ++j)
    z += prob[j] * complexd(std::cos(theta[j]), std::sin(theta[j]));
  const double mean = std::abs(z) > 1e-12 ? std::arg(z) : 0.0;

  // Std over the window (mean - pi, mean + pi].
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double phi = std::fmod(theta[j] - mean + std::numbers::pi, two_pi);
    if (phi < 0.0) phi += two_pi;
    phi -= std::numbers::pi;
    if (phi <= -std::numbers::pi + 1e-15) phi += two_pi;
    m1 += prob[j] * phi;
    m2 += prob[j] * phi * phi;
  }
  PhaseStatistics stats;
  stats.mean_phase = mean;
  stats.delta_theta = std::sqrt(std::max(m2 - m1 * m1, 0.0));
  return stats;
}

double truncation_weight(const FockVector& psi, std::size_t levels) {
  const std::size_t d = psi.dim();
  const std::size_t start = levels >= d ? 0 : d - levels;
  double w = 0.0;
  for (std::size_t n = start; n < d; ++n) w += std::norm(psi.amplitudes[n]);
  return w;
}

bool near_truncation_edge(const FockVector& psi, std::size_t levels, double tol) {
  return truncation_weight(psi, levels) > tol;
}

}  // namespace qmclab
