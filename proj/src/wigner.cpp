#include "qmclab/wigner.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qmclab/rng.hpp"

namespace qmclab {

namespace {

std::vector<double> axis_points(double lo, double hi, std::size_t bins) {
  if (bins < 2) throw std::invalid_argument("GridSpec: bins must be >= 2");
  if (!(hi > lo)) throw std::invalid_argument("GridSpec: hi must exceed lo");
  std::vector<double> pts(bins);
  const double step = (hi - lo) / static_cast<double>(bins - 1);
  for (std::size_t i = 0; i < bins; ++i)
    pts[i] = lo + step * static_cast<double>(i);
  return pts;
}

}  // namespace

double Sinogram::theta(std::size_t j) const {
  return std::numbers::pi * static_cast<double>(j) /
         static_cast<double>(theta_bins);
}

double Sinogram::dx() const {
  return (x_hi - x_lo) / static_cast<double>(x_bins);
}

double Sinogram::x_center(std::size_t i) const {
  return x_lo + (static_cast<double>(i) + 0.5) * dx();
}

double Sinogram::count_at(std::size_t j, std::size_t i) const {
  return counts[j * x_bins + i];
}

double Sinogram::row_total(std::size_t j) const {
  double total = 0.0;
  for (std::size_t i = 0; i < x_bins; ++i) total += count_at(j, i);
  return total;
}

double Sinogram::density(std::size_t j, std::size_t i) const {
  const double total = row_total(j);
  if (total <= 0.0) return 0.0;
  return count_at(j, i) / (total * dx());
}

GridSpec GridSpec::symmetric(double extent, double step) {
  if (!(extent > 0.0) || !(step > 0.0))
    throw std::invalid_argument("GridSpec: extent and step must be > 0");
  const std::size_t bins =
      static_cast<std::size_t>(std::llround(2.0 * extent / step)) + 1;
  return GridSpec{-extent, extent, -extent, extent, bins, bins};
}

double WignerGrid::value(std::size_t iq, std::size_t ip) const {
  return values[iq * p_axis.size() + ip];
}

double WignerGrid::integral() const {
  double total = 0.0;
  for (double v : values) total += v;
  return total * cell_area;
}

double quadrature_mean(std::complex<double> alpha0, double theta) {
  return std::numbers::sqrt2 *
         (alpha0 * std::exp(std::complex<double>(0.0, -theta))).real();
}

Sinogram sample_quadratures(std::complex<double> alpha0,
                            std::uint64_t n_per_angle, std::size_t theta_bins,
                            std::uint64_t rng_seed, std::size_t x_bins) {
  if (n_per_angle == 0)
    throw std::invalid_argument("sample_quadratures: n_per_angle must be >= 1");
  if (theta_bins == 0 || x_bins == 0)
    throw std::invalid_argument("sample_quadratures: bins must be >= 1");

  Sinogram sg;
  sg.theta_bins = theta_bins;
  sg.x_bins = x_bins;
  sg.x_hi = std::abs(alpha0) * std::numbers::sqrt2 + 5.0;
  sg.x_lo = -sg.x_hi;
  sg.counts.assign(theta_bins * x_bins, 0.0);

  const double sigma = 1.0 / std::numbers::sqrt2;  // vacuum variance 1/2
  const double inv_dx = static_cast<double>(x_bins) / (sg.x_hi - sg.x_lo);
  for (std::size_t j = 0; j < theta_bins; ++j) {
    const double mean = quadrature_mean(alpha0, sg.theta(j));
    Rng rng(derive_seed(rng_seed, j, 0));
    for (std::uint64_t s = 0; s < n_per_angle; ++s) {
      const double x = mean + sigma * rng.next_gaussian();
      const double pos = (x - sg.x_lo) * inv_dx;
      if (pos < 0.0 || pos >= static_cast<double>(x_bins)) continue;
      sg.counts[j * x_bins + static_cast<std::size_t>(pos)] += 1.0;
    }
  }
  return sg;
}

Sinogram analytic_sinogram(std::complex<double> alpha0, std::size_t theta_bins,
                           std::size_t x_bins, double x_lo, double x_hi) {
  if (theta_bins == 0 || x_bins == 0)
    throw std::invalid_argument("analytic_sinogram: bins must be >= 1");
  if (!(x_hi > x_lo))
    throw std::invalid_argument("analytic_sinogram: x_hi must exceed x_lo");

  Sinogram sg;
  sg.theta_bins = theta_bins;
  sg.x_bins = x_bins;
  sg.x_lo = x_lo;
  sg.x_hi = x_hi;
  sg.counts.assign(theta_bins * x_bins, 0.0);

  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t j = 0; j < theta_bins; ++j) {
    const double mean = quadrature_mean(alpha0, sg.theta(j));
    for (std::size_t i = 0; i < x_bins; ++i) {
      const double d = sg.x_center(i) - mean;
      sg.counts[j * x_bins + i] = inv_sqrt_pi * std::exp(-d * d);
    }
  }
  return sg;
}

WignerGrid analytic_wigner_coherent(std::complex<double> alpha0,
                                    const GridSpec& spec) {
  WignerGrid grid;
  grid.q_axis = axis_points(spec.q_lo, spec.q_hi, spec.q_bins);
  grid.p_axis = axis_points(spec.p_lo, spec.p_hi, spec.p_bins);
  grid.cell_area = (grid.q_axis[1] - grid.q_axis[0]) *
                   (grid.p_axis[1] - grid.p_axis[0]);
  grid.values.resize(spec.q_bins * spec.p_bins);

  const double qbar = std::numbers::sqrt2 * alpha0.real();
  const double pbar = std::numbers::sqrt2 * alpha0.imag();
  const double inv_pi = 1.0 / std::numbers::pi;
  for (std::size_t iq = 0; iq < spec.q_bins; ++iq) {
    const double dq = grid.q_axis[iq] - qbar;
    for (std::size_t ip = 0; ip < spec.p_bins; ++ip) {
      const double dp = grid.p_axis[ip] - pbar;
      grid.values[iq * spec.p_bins + ip] = inv_pi * std::exp(-dq * dq - dp * dp);
    }
  }
  return grid;
}

double fbp_kernel(double y, double k_c) {
  const double u = k_c * y;
  if (std::abs(u) < 1e-2) {
    const double u2 = u * u;
    return k_c * k_c * (1.0 - u2 / 4.0 + u2 * u2 / 72.0);
  }
  return 2.0 * (std::cos(u) + u * std::sin(u) - 1.0) / (y * y);
}

WignerGrid inverse_radon(const Sinogram& sinogram, double k_c,
                         const GridSpec& spec) {
  if (!(k_c > 0.0)) throw std::invalid_argument("inverse_radon: k_c must be > 0");
  if (sinogram.theta_bins == 0 || sinogram.x_bins == 0 ||
      sinogram.counts.size() != sinogram.theta_bins * sinogram.x_bins)
    throw std::invalid_argument("inverse_radon: empty or malformed sinogram");

  WignerGrid grid;
  grid.q_axis = axis_points(spec.q_lo, spec.q_hi, spec.q_bins);
  grid.p_axis = axis_points(spec.p_lo, spec.p_hi, spec.p_bins);
  grid.cell_area = (grid.q_axis[1] - grid.q_axis[0]) *
                   (grid.p_axis[1] - grid.p_axis[0]);
  grid.values.assign(spec.q_bins * spec.p_bins, 0.0);

  const std::size_t nx = sinogram.x_bins;
  const double dx = sinogram.dx();
  const double dtheta = std::numbers::pi / static_cast<double>(sinogram.theta_bins);

  // Per-bin trig is hoisted out of the hot loop via
  // cos(k_c(t - x_i)) = cos(k_c t) cos(k_c x_i) + sin(k_c t) sin(k_c x_i).
  std::vector<double> dens(nx), cos_kx(nx), sin_kx(nx), centers(nx);
  const double kc2 = k_c * k_c;

  for (std::size_t j = 0; j < sinogram.theta_bins; ++j) {
    const double total = sinogram.row_total(j);
    if (total <= 0.0) continue;
    for (std::size_t i = 0; i < nx; ++i) {
      dens[i] = sinogram.count_at(j, i) / (total * dx);
      centers[i] = sinogram.x_center(i);
      cos_kx[i] = std::cos(k_c * centers[i]);
      sin_kx[i] = std::sin(k_c * centers[i]);
    }
    const double cos_th = std::cos(sinogram.theta(j));
    const double sin_th = std::sin(sinogram.theta(j));

    for (std::size_t iq = 0; iq < spec.q_bins; ++iq) {
      const double q_cos = grid.q_axis[iq] * cos_th;
      for (std::size_t ip = 0; ip < spec.p_bins; ++ip) {
        const double t = q_cos + grid.p_axis[ip] * sin_th;
        const double cos_kt = std::cos(k_c * t);
        const double sin_kt = std::sin(k_c * t);
        double acc = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
          if (dens[i] == 0.0) continue;
          const double y = t - centers[i];
          const double u = k_c * y;
          double kernel;
          if (u < 1e-2 && u > -1e-2) {
            const double u2 = u * u;
            kernel = kc2 * (1.0 - u2 / 4.0 + u2 * u2 / 72.0);
          } else {
            const double cos_u = cos_kt * cos_kx[i] + sin_kt * sin_kx[i];
            const double sin_u = sin_kt * cos_kx[i] - cos_kt * sin_kx[i];
            kernel = 2.0 * (cos_u + u * sin_u - 1.0) / (y * y);
          }
          acc += dens[i] * kernel;
        }
        grid.values[iq * spec.p_bins + ip] += acc * dx * dtheta;
      }
    }
  }

  const double prefactor = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  for (double& v : grid.values) v *= prefactor;
  return grid;
}

}  // namespace qmclab
