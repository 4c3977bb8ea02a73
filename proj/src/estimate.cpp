#include "qmclab/estimate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "qmclab/oracle.hpp"
#include "qmclab/rng.hpp"

namespace qmclab {

namespace {

constexpr std::size_t kMleGridSize = 4096;
constexpr double kMleRefineTol = 1e-10;

}  // namespace

TomographyResult pauli_tomography(const DensityMatrix& source,
                                  std::uint64_t m_per_axis,
                                  std::uint64_t rng_seed, CopyBudget& budget) {
  if (m_per_axis == 0)
    throw std::invalid_argument("pauli_tomography: m_per_axis must be >= 1");

  const std::array<PauliAxis, 3> axes = {PauliAxis::x, PauliAxis::y,
                                         PauliAxis::z};
  std::array<double, 3> t{};
  for (std::size_t i = 0; i < 3; ++i) {
    const OutcomeCounts counts = sample_pauli(
        source, axes[i], m_per_axis, derive_seed(rng_seed, i, 0), budget);
    t[i] = 2.0 * static_cast<double>(counts.n_pass) /
               static_cast<double>(m_per_axis) -
           1.0;
  }

  std::array<double, 3> b = t;
  const double r = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
  if (r > 1.0)
    for (double& bi : b) bi /= r;

  return TomographyResult{
      density_from_pauli_expectations(b[0], b[1], b[2]), t, 3 * m_per_axis,
      1.0 / std::sqrt(static_cast<double>(m_per_axis))};
}

HalfIntervalOracle make_half_interval_oracle(double true_k) {
  const double k = wrap_mod_pi(true_k);
  return [k](double lo, double hi) { return k < 0.5 * (lo + hi); };
}

BinGrid bisection_search(const HalfIntervalOracle& oracle, std::uint32_t m) {
  if (m == 0 || m > 63)
    throw std::invalid_argument("bisection_search: m must be in 1..63");
  double lo = 0.0, hi = std::numbers::pi;
  std::uint64_t index = 0;
  for (std::uint32_t step = 0; step < m; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (oracle(lo, hi)) {
      hi = mid;
      index = 2 * index;
    } else {
      lo = mid;
      index = 2 * index + 1;
    }
  }
  return BinGrid{m, std::ldexp(std::numbers::pi, -static_cast<int>(m)), index};
}

namespace {

struct MleTables {
  std::array<double, kMleGridSize> log_cos2;
  std::array<double, kMleGridSize> log_sin2;
};

const MleTables& mle_tables() {
  static const MleTables tables = [] {
    MleTables t;
    for (std::size_t i = 0; i < kMleGridSize; ++i) {
      const double k = (static_cast<double>(i) + 0.5) * std::numbers::pi /
                       static_cast<double>(kMleGridSize);
      t.log_cos2[i] = 2.0 * std::log(std::abs(std::cos(k)));
      t.log_sin2[i] = 2.0 * std::log(std::abs(std::sin(k)));
    }
    return t;
  }();
  return tables;
}

double log_clamped(double v) { return std::log(std::max(v, 1e-300)); }

double mle_log_likelihood(double k, double c0, double f0, double c1,
                          double f1) {
  const double cos0 = std::cos(k), sin0 = std::sin(k);
  const double cos1 = std::cos(k - std::numbers::pi / 4.0);
  const double sin1 = std::sin(k - std::numbers::pi / 4.0);
  return c0 * log_clamped(cos0 * cos0) + f0 * log_clamped(sin0 * sin0) +
         c1 * log_clamped(cos1 * cos1) + f1 * log_clamped(sin1 * sin1);
}

}  // namespace

MleEstimate mle_polarization(const PureQubit& true_state,
                             std::uint64_t n_photons, std::uint64_t rng_seed,
                             CopyBudget& budget) {
  if (n_photons < 2)
    throw std::invalid_argument("mle_polarization: n_photons must be >= 2");

  const std::uint64_t n0 = n_photons / 2;
  const std::uint64_t n1 = n_photons - n0;
  const OutcomeCounts counts0 = sample_polarization(
      true_state, 0.0, n0, derive_seed(rng_seed, 0, 0), budget);
  const OutcomeCounts counts1 =
      sample_polarization(true_state, std::numbers::pi / 4.0, n1,
                          derive_seed(rng_seed, 1, 0), budget);

  const double c0 = static_cast<double>(counts0.n_pass);
  const double f0 = static_cast<double>(n0 - counts0.n_pass);
  const double c1 = static_cast<double>(counts1.n_pass);
  const double f1 = static_cast<double>(n1 - counts1.n_pass);

  // Grid scan over midpoints; the pi/4 basis reuses the same tables shifted
  // by a quarter turn of the grid (cos^2/sin^2 are pi-periodic).
  const MleTables& tables = mle_tables();
  constexpr std::size_t kShift = kMleGridSize / 4;
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kMleGridSize; ++i) {
    const std::size_t j = (i + kMleGridSize - kShift) % kMleGridSize;
    const double value = c0 * tables.log_cos2[i] + f0 * tables.log_sin2[i] +
                         c1 * tables.log_cos2[j] + f1 * tables.log_sin2[j];
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }

  const double step = std::numbers::pi / static_cast<double>(kMleGridSize);
  const double center = (static_cast<double>(best) + 0.5) * step;
  double a = center - 1.5 * step;
  double b = center + 1.5 * step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double v1 = mle_log_likelihood(x1, c0, f0, c1, f1);
  double v2 = mle_log_likelihood(x2, c0, f0, c1, f1);
  while (b - a > kMleRefineTol) {
    if (v1 >= v2) {
      b = x2;
      x2 = x1;
      v2 = v1;
      x1 = b - inv_phi * (b - a);
      v1 = mle_log_likelihood(x1, c0, f0, c1, f1);
    } else {
      a = x1;
      x1 = x2;
      v1 = v2;
      x2 = a + inv_phi * (b - a);
      v2 = mle_log_likelihood(x2, c0, f0, c1, f1);
    }
  }

  return MleEstimate{PolarizationAngle(0.5 * (a + b)), n_photons};
}

UncertaintyPoint uncertainty_product(std::uint32_t m) {
  if (m == 0)
    throw std::invalid_argument("uncertainty_product: m must be >= 1");
  const int exponent = -static_cast<int>(std::min<std::uint32_t>(m, 2000));
  const double delta_k = std::ldexp(std::numbers::pi, exponent);
  return UncertaintyPoint{m, static_cast<double>(m), delta_k,
                          static_cast<double>(m) * delta_k};
}

double estimator_trial_error(EstimatorKind estimator, double true_k,
                             std::uint64_t n_copies, std::uint64_t rng_seed,
                             const ComplexityOptions& options) {
  if (n_copies == 0)
    throw std::invalid_argument("estimator_trial_error: n_copies must be >= 1");
  const PureQubit state = make_linear_polarization(PolarizationAngle(true_k));
  CopyBudget budget;

  switch (estimator) {
    case EstimatorKind::bisection: {
      const std::uint32_t m =
          static_cast<std::uint32_t>(std::min<std::uint64_t>(n_copies, 63));
      budget.charge(m, "bisection");
      // The error an m-query bisection certifies is its bin width.
      return bisection_search(make_half_interval_oracle(true_k), m).bin_width;
    }
    case EstimatorKind::mle: {
      const MleEstimate est = mle_polarization(
          state, std::max<std::uint64_t>(n_copies, 2), rng_seed, budget);
      return wrapped_angle_distance(est.k_hat.value(), true_k);
    }
    case EstimatorKind::tomography: {
      const std::uint64_t m = std::max<std::uint64_t>(n_copies / 3, 1);
      const TomographyResult res =
          pauli_tomography(DensityMatrix::pure(state), m, rng_seed, budget);
      const double k_hat = 0.5 * std::atan2(res.expectation_estimates[0],
                                            res.expectation_estimates[2]);
      return wrapped_angle_distance(k_hat, true_k);
    }
    case EstimatorKind::exact_oracle: {
      const OracleAnswer ans = exact_oracle(state, budget);
      return wrapped_angle_distance(ans.estimate.value(), true_k);
    }
    case EstimatorKind::probabilistic_oracle: {
      // n single-copy calls combined by a circular mean on doubled angles.
      complexd z = 0;
      for (std::uint64_t i = 0; i < n_copies; ++i) {
        const OracleAnswer ans = probabilistic_oracle(
            state, options.oracle_sigma, derive_seed(rng_seed, 2, i), budget);
        const double two_k = 2.0 * ans.estimate.value();
        z += complexd(std::cos(two_k), std::sin(two_k));
      }
      const double k_hat = wrap_mod_pi(0.5 * std::arg(z));
      return wrapped_angle_distance(k_hat, true_k);
    }
  }
  throw std::invalid_argument("estimator_trial_error: unknown estimator");
}

namespace {

double median_trial_error(EstimatorKind estimator, std::uint64_t n,
                          std::uint64_t trials, std::uint64_t rng_seed,
                          const ComplexityOptions& options) {
  std::vector<double> errors;
  errors.reserve(trials);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng angle_rng(derive_seed(rng_seed, 0, t));
    const double true_k = std::numbers::pi * angle_rng.next_double();
    errors.push_back(estimator_trial_error(estimator, true_k, n,
                                           derive_seed(rng_seed, n, t),
                                           options));
  }
  std::sort(errors.begin(), errors.end());
  const std::size_t half = errors.size() / 2;
  return errors.size() % 2 == 1
             ? errors[half]
             : 0.5 * (errors[half - 1] + errors[half]);
}

}  // namespace

std::vector<ComplexityPoint> complexity_profile(
    EstimatorKind estimator, const std::vector<double>& accuracy_targets,
    std::uint64_t trials, std::uint64_t rng_seed,
    const ComplexityOptions& options) {
  if (accuracy_targets.empty())
    throw std::invalid_argument("complexity_profile: no targets");
  for (std::size_t i = 0; i < accuracy_targets.size(); ++i) {
    if (accuracy_targets[i] <= 0.0)
      throw std::invalid_argument("complexity_profile: targets must be > 0");
    if (i > 0 && accuracy_targets[i] >= accuracy_targets[i - 1])
      throw std::invalid_argument("complexity_profile: targets must decrease");
  }
  if (trials == 0)
    throw std::invalid_argument("complexity_profile: trials must be >= 1");

  const std::uint64_t floor_copies =
      estimator == EstimatorKind::mle ? 2 : 1;
  std::map<std::uint64_t, double> cache;
  const auto median_at = [&](std::uint64_t n) {
    const auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    const double med = median_trial_error(estimator, n, trials, rng_seed, options);
    cache.emplace(n, med);
    return med;
  };

  std::vector<ComplexityPoint> profile;
  std::uint64_t search_floor = floor_copies;
  for (const double target : accuracy_targets) {
    ComplexityPoint point{target, 0, false, 0.0};
    if (median_at(search_floor) <= target) {
      point.min_copies = search_floor;
      point.median_error = median_at(search_floor);
    } else {
      std::uint64_t lo = search_floor;  // median(lo) > target
      std::uint64_t hi = lo;
      bool found = false;
      while (hi < options.copy_cap) {
        hi = std::min(hi * 2, options.copy_cap);
        if (median_at(hi) <= target) {
          found = true;
          break;
        }
        lo = hi;
      }
      if (!found) {
        point.min_copies = options.copy_cap;
        point.saturated = true;
        point.median_error = median_at(options.copy_cap);
        profile.push_back(point);
        search_floor = options.copy_cap;
        continue;
      }
      while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (median_at(mid) <= target)
          hi = mid;
        else
          lo = mid;
      }
      point.min_copies = hi;
      point.median_error = median_at(hi);
    }
    profile.push_back(point);
    search_floor = point.min_copies;
  }
  return profile;
}

}  // namespace qmclab
