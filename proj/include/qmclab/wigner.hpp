// Homodyne-tomography pipeline for Gaussian states: quadrature sampling into
// a sinogram and Wigner reconstruction by band-limited filtered
// back-projection.
//
// Quadrature convention: x_theta = (a e^{-i theta} + a^dag e^{i theta})/sqrt(2),
// vacuum variance 1/2, so a coherent state alpha0 has quadrature mean
// sqrt(2) Re(alpha0 e^{-i theta}). The reconstruction prefactor is fixed by
// exact agreement with the analytic vacuum Wigner function.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qmclab {

struct QuadratureSample {
  double x;
  double theta;  // local-oscillator phase in [0, pi)
};

// Histogrammed quadrature data: theta_bins rows of x_bins cells covering
// [x_lo, x_hi); row j holds counts for theta(j) = j pi / theta_bins.
// Samples falling outside the range are dropped.
struct Sinogram {
  std::size_t theta_bins = 0;
  std::size_t x_bins = 0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::vector<double> counts;  // theta-major, theta_bins * x_bins

  double theta(std::size_t j) const;
  double dx() const;
  double x_center(std::size_t i) const;
  double count_at(std::size_t j, std::size_t i) const;
  double row_total(std::size_t j) const;
  // Probability density over x for row j: count / (row_total * dx).
  double density(std::size_t j, std::size_t i) const;
};

// Uniform point grid with endpoints included: bins points per axis,
// spacing (hi - lo)/(bins - 1); requires bins >= 2.
struct GridSpec {
  double q_lo, q_hi;
  double p_lo, p_hi;
  std::size_t q_bins;
  std::size_t p_bins;

  static GridSpec symmetric(double extent, double step);
};

struct WignerGrid {
  std::vector<double> q_axis;
  std::vector<double> p_axis;
  std::vector<double> values;  // q-major, q_axis.size() * p_axis.size()
  double cell_area = 0.0;

  double value(std::size_t iq, std::size_t ip) const;
  double integral() const;  // sum of values * cell_area
};

double quadrature_mean(std::complex<double> alpha0, double theta);

// Draws n_per_angle Gaussian quadrature samples (variance 1/2) for each of
// theta_bins equally spaced phases in [0, pi); default histogram range is
// +/- (|alpha0| sqrt(2) + 5) with 240 bins. Each row's stream is seeded
// independently from rng_seed, so results do not depend on evaluation order.
Sinogram sample_quadratures(std::complex<double> alpha0,
                            std::uint64_t n_per_angle, std::size_t theta_bins,
                            std::uint64_t rng_seed, std::size_t x_bins = 240);

// Noise-free sinogram: each row holds the exact Gaussian quadrature density
// evaluated at bin centers. Reference input for reconstruction tests.
Sinogram analytic_sinogram(std::complex<double> alpha0, std::size_t theta_bins,
                           std::size_t x_bins, double x_lo, double x_hi);

// W(q, p) = (1/pi) exp(-(q - qbar)^2 - (p - pbar)^2) with
// qbar = sqrt(2) Re alpha0, pbar = sqrt(2) Im alpha0.
WignerGrid analytic_wigner_coherent(std::complex<double> alpha0,
                                    const GridSpec& spec);

// Band-limited back-projection kernel with hard frequency cutoff k_c:
// K_c(y) = 2 (cos(k_c y) + k_c y sin(k_c y) - 1) / y^2, K_c(0) = k_c^2;
// a series expansion is used for |k_c y| < 1e-2.
double fbp_kernel(double y, double k_c);

// Filtered back-projection:
// W(q, p) = (1/(4 pi^2)) dtheta dx sum_j sum_i density(j, i)
//           * K_c(q cos theta_j + p sin theta_j - x_i).
// Throws std::invalid_argument for k_c <= 0 or an empty sinogram.
WignerGrid inverse_radon(const Sinogram& sinogram, double k_c,
                         const GridSpec& spec);

}  // namespace qmclab
