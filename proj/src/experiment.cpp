#include "qmclab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qmclab/clone.hpp"
#include "qmclab/estimate.hpp"
#include "qmclab/fock.hpp"
#include "qmclab/measure.hpp"
#include "qmclab/oracle.hpp"
#include "qmclab/qstate.hpp"
#include "qmclab/rng.hpp"
#include "qmclab/wigner.hpp"

namespace qmclab {

namespace {

std::string fmt_f(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_u(std::uint64_t v) { return std::to_string(v); }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ParamSpec {
  const char* key;
  double def;
  double min;
  double max;
  bool integer;
};

struct ExperimentSpec {
  const char* name;
  std::uint64_t default_trials;
  std::vector<ParamSpec> params;
  std::vector<const char*> text_keys;
};

const std::vector<ExperimentSpec>& experiment_specs() {
  static const std::vector<ExperimentSpec> specs = {
      {"tomography-scaling",
       200,
       {{"m_start", 100, 1, 1e9, true},
        {"m_factor", 10, 2, 1000, true},
        {"m_count", 3, 1, 12, true}},
       {}},
      {"bisection",
       10000,
       {{"m", 20, 1, 63, true}},
       {}},
      {"mle-scaling",
       200,
       {{"n_start", 100, 2, 1e9, true},
        {"n_factor", 10, 2, 1000, true},
        {"n_count", 4, 1, 12, true}},
       {}},
      {"uncertainty-curve",
       1,
       {{"m_max", 20, 1, 1000, true}},
       {}},
      {"verifier",
       1000000,
       {{"m_max", 8, 1, 40, true},
        {"epsilon", std::numbers::pi / 4.0, -10.0, 10.0, false}},
       {}},
      {"clone-fidelity", 1000, {}, {}},
      {"clone-tomography",
       20,
       {{"true_k", 0.0, -100.0, 100.0, false},
        {"m_per_axis", 100000, 1, 1e9, true},
        {"n_clones", 0, 0, 1e18, true}},  // 0 = auto (3 * m_per_axis)
       {}},
      {"wigner",
       1,
       {{"alpha_re", 0.0, -8.0, 8.0, false},
        {"alpha_im", 0.0, -8.0, 8.0, false},
        {"n_per_angle", 10000, 1, 1e9, true},
        {"theta_bins", 180, 1, 100000, true},
        {"k_c", 5.0, 1e-6, 1e6, false},
        {"grid_extent", 4.0, 1e-3, 100.0, false},
        {"grid_step", 0.1, 1e-4, 10.0, false},
        {"x_bins", 240, 2, 100000, true}},
       {}},
      {"number-phase",
       1,
       {{"alpha_start", 1.0, 0.0, 8.0, false},
        {"alpha_stop", 6.0, 0.0, 8.0, false},
        {"alpha_step", 0.5, 1e-3, 8.0, false},
        {"dim", 256, 2, 4096, true}},
       {}},
      {"complexity-profile",
       15,
       {{"target_count", 4, 1, 40, true},
        {"target_start", 0.3, 1e-12, 3.2, false},
        {"target_decay", 0.5, 1e-6, 0.999999, false},
        {"targets_pow2", 0, 0, 1, true},
        {"oracle_sigma", 0.1, 0.0, 10.0, false},
        {"copy_cap", 10000000, 1, 1e12, true}},
       {"estimator"}},
  };
  return specs;
}

const ExperimentSpec* find_spec(const std::string& name) {
  for (const ExperimentSpec& spec : experiment_specs())
    if (name == spec.name) return &spec;
  return nullptr;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const std::size_t pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

[[noreturn]] void fail_at(const std::string& text, const std::string& key,
                          const std::string& message) {
  throw config_error("config:" + std::to_string(line_of_key(text, key)) +
                     ": " + message);
}

double require_param(const ExperimentConfig& cfg, const std::string& key) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end())
    throw config_error("config:1: missing parameter '" + key + "'");
  return it->second;
}

std::uint64_t param_u64(const ExperimentConfig& cfg, const std::string& key) {
  return static_cast<std::uint64_t>(std::llround(require_param(cfg, key)));
}

PureQubit haar_random_qubit(Rng& rng) {
  for (;;) {
    const complexd a(rng.next_gaussian(), rng.next_gaussian());
    const complexd b(rng.next_gaussian(), rng.next_gaussian());
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n > 1e-6) return PureQubit(a / n, b / n);
  }
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  jobs = std::min<std::size_t>(std::max<std::size_t>(jobs, 1), count);
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct SummaryBuilder {
  Summary summary;
  std::ostringstream text;

  void stat(const std::string& key, double value) {
    summary.stats[key] = value;
  }
  void line(const std::string& s) { text << s << "\n"; }
  Summary finish() {
    summary.text = text.str();
    return summary;
  }
};

// ---------------------------------------------------------------- runners

Summary run_tomography_scaling(const ExperimentConfig& cfg, CsvTable& csv) {
  const std::uint64_t m_start = param_u64(cfg, "m_start");
  const std::uint64_t m_factor = param_u64(cfg, "m_factor");
  const std::uint64_t m_count = param_u64(cfg, "m_count");
  const std::uint64_t repeats = cfg.trials;

  std::vector<std::uint64_t> m_values(m_count);
  for (std::size_t i = 0; i < m_count; ++i) {
    m_values[i] = m_start;
    for (std::size_t f = 0; f < i; ++f) m_values[i] *= m_factor;
  }

  const DensityMatrix mixed = density_from_pauli_expectations(0, 0, 0);
  csv.header = {"experiment", "trial", "seed", "copies",
                "m",          "tx",    "ty",   "tz"};
  const std::size_t total = m_count * repeats;
  csv.rows.resize(total);
  std::vector<std::array<double, 3>> estimates(total);

  parallel_for(total, cfg.jobs, [&](std::size_t idx) {
    const std::size_t i = idx / repeats;
    const std::size_t r = idx % repeats;
    const std::uint64_t m = m_values[i];
    const std::uint64_t seed = derive_seed(cfg.seed, i, r);
    CopyBudget budget;
    const TomographyResult res = pauli_tomography(mixed, m, seed, budget);
    estimates[idx] = res.expectation_estimates;
    csv.rows[idx] = {cfg.experiment,
                     fmt_u(idx),
                     fmt_u(seed),
                     fmt_u(res.copies_used),
                     fmt_u(m),
                     fmt_f(res.expectation_estimates[0]),
                     fmt_f(res.expectation_estimates[1]),
                     fmt_f(res.expectation_estimates[2])};
  });

  SummaryBuilder sb;
  sb.line("experiment: tomography-scaling");
  std::vector<double> xs, ys;
  const char* axis_names[3] = {"x", "y", "z"};
  for (std::size_t i = 0; i < m_count; ++i) {
    const std::uint64_t m = m_values[i];
    double axis_std_sum = 0.0;
    std::array<double, 3> stds{};
    for (std::size_t axis = 0; axis < 3; ++axis) {
      double mean = 0.0;
      for (std::size_t r = 0; r < repeats; ++r)
        mean += estimates[i * repeats + r][axis];
      mean /= static_cast<double>(repeats);
      double ss = 0.0;
      for (std::size_t r = 0; r < repeats; ++r) {
        const double d = estimates[i * repeats + r][axis] - mean;
        ss += d * d;
      }
      const double divisor = repeats > 1 ? static_cast<double>(repeats - 1)
                                         : 1.0;
      stds[axis] = std::sqrt(ss / divisor);
      axis_std_sum += stds[axis];
      sb.stat("std_" + std::string(axis_names[axis]) + "_" + fmt_u(m),
              stds[axis]);
    }
    const double predicted = 1.0 / std::sqrt(static_cast<double>(m));
    sb.stat("predicted_" + fmt_u(m), predicted);
    xs.push_back(static_cast<double>(m));
    ys.push_back(axis_std_sum / 3.0);
    sb.line("m=" + fmt_u(m) + ": std=(" + fmt_g(stds[0]) + ", " +
            fmt_g(stds[1]) + ", " + fmt_g(stds[2]) + ") predicted " +
            fmt_g(predicted));
  }
  if (xs.size() >= 2) {
    const LogLogFit fit = fit_loglog(xs, ys);
    sb.stat("slope", fit.slope);
    sb.stat("rms_residual", fit.rms_residual);
    sb.line("log-log slope of mean per-axis std vs m: " + fmt_g(fit.slope) +
            " (rms residual " + fmt_g(fit.rms_residual) + ")");
  }
  return sb.finish();
}

Summary run_bisection(const ExperimentConfig& cfg, CsvTable& csv) {
  const std::uint32_t m = static_cast<std::uint32_t>(param_u64(cfg, "m"));
  const std::uint64_t trials = cfg.trials;

  csv.header = {"experiment", "trial",     "seed",      "copies", "m",
                "true_k",     "bin_index", "bin_width", "contained"};
  csv.rows.resize(trials);
  std::atomic<std::uint64_t> contained_count{0};
  std::atomic<std::uint64_t> width_exact_count{0};
  const double expected_width = std::ldexp(std::numbers::pi, -static_cast<int>(m));

  parallel_for(trials, cfg.jobs, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(cfg.seed, 0, t);
    Rng rng(seed);
    const double true_k = std::numbers::pi * rng.next_double();
    const BinGrid bin = bisection_search(make_half_interval_oracle(true_k), m);
    const double lo = static_cast<double>(bin.bin_index) * bin.bin_width;
    const double hi = static_cast<double>(bin.bin_index + 1) * bin.bin_width;
    const bool contained = true_k >= lo && true_k < hi;
    if (contained) ++contained_count;
    if (bin.bin_width == expected_width) ++width_exact_count;
    csv.rows[t] = {cfg.experiment,
                   fmt_u(t),
                   fmt_u(seed),
                   fmt_u(m),
                   fmt_u(m),
                   fmt_f(true_k),
                   fmt_u(bin.bin_index),
                   fmt_f(bin.bin_width),
                   contained ? "1" : "0"};
  });

  SummaryBuilder sb;
  sb.line("experiment: bisection");
  const double contained_fraction =
      static_cast<double>(contained_count.load()) / static_cast<double>(trials);
  const double width_fraction =
      static_cast<double>(width_exact_count.load()) / static_cast<double>(trials);
  sb.stat("contained_fraction", contained_fraction);
  sb.stat("width_exact_fraction", width_fraction);
  sb.stat("bin_width", expected_width);
  sb.line("m=" + fmt_u(m) + ", trials=" + fmt_u(trials) +
          ": contained fraction " + fmt_g(contained_fraction) +
          ", exact-width fraction " + fmt_g(width_fraction));
  return sb.finish();
}

Summary run_mle_scaling(const ExperimentConfig& cfg, CsvTable& csv) {
  const std::uint64_t n_start = param_u64(cfg, "n_start");
  const std::uint64_t n_factor = param_u64(cfg, "n_factor");
  const std::uint64_t n_count = param_u64(cfg, "n_count");
  const std::uint64_t trials = cfg.trials;

  std::vector<std::uint64_t> n_values(n_count);
  for (std::size_t i = 0; i < n_count; ++i) {
    n_values[i] = n_start;
    for (std::size_t f = 0; f < i; ++f) n_values[i] *= n_factor;
  }

  csv.header = {"experiment", "trial", "seed",  "copies",
                "n",          "true_k", "k_hat", "wrapped_error"};
  const std::size_t total = n_count * trials;
  csv.rows.resize(total);
  std::vector<double> errors(total);

  parallel_for(total, cfg.jobs, [&](std::size_t idx) {
    const std::size_t i = idx / trials;
    const std::size_t t = idx % trials;
    const std::uint64_t n = n_values[i];
    Rng angle_rng(derive_seed(cfg.seed, 0, idx));
    const double true_k = std::numbers::pi * angle_rng.next_double();
    const PureQubit state = make_linear_polarization(PolarizationAngle(true_k));
    const std::uint64_t seed = derive_seed(cfg.seed, n, t);
    CopyBudget budget;
    const MleEstimate est = mle_polarization(state, n, seed, budget);
    const double err = wrapped_angle_distance(est.k_hat.value(), true_k);
    errors[idx] = err;
    csv.rows[idx] = {cfg.experiment,          fmt_u(idx),
                     fmt_u(seed),             fmt_u(est.copies_used),
                     fmt_u(n),                fmt_f(true_k),
                     fmt_f(est.k_hat.value()), fmt_f(err)};
  });

  SummaryBuilder sb;
  sb.line("experiment: mle-scaling");
  std::vector<double> xs, ys;
  double min_product = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_count; ++i) {
    const std::uint64_t n = n_values[i];
    double ss = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double e = errors[i * trials + t];
      ss += e * e;
    }
    const double rms = std::sqrt(ss / static_cast<double>(trials));
    const double nd = static_cast<double>(n);
    xs.push_back(nd);
    ys.push_back(rms);
    sb.stat("rms_" + fmt_u(n), rms);
    sb.stat("product_" + fmt_u(n), nd * rms);
    sb.stat("sqrt_product_" + fmt_u(n), std::sqrt(nd) * rms);
    min_product = std::min(min_product, nd * rms);
    sb.line("n=" + fmt_u(n) + ": rms_error=" + fmt_g(rms) + "  n*error=" +
            fmt_g(nd * rms) + "  sqrt(n)*error=" + fmt_g(std::sqrt(nd) * rms));
  }
  if (xs.size() >= 2) {
    const LogLogFit fit = fit_loglog(xs, ys);
    sb.stat("slope", fit.slope);
    sb.stat("rms_residual", fit.rms_residual);
    sb.line("log-log slope of rms error vs copies: " + fmt_g(fit.slope) +
            " (rms residual " + fmt_g(fit.rms_residual) + ")");
  }
  sb.stat("conjecture_min_product", min_product);
  sb.line("copies-times-error report: min over sampled n of n*error = " +
          fmt_g(min_product) +
          (min_product >= 0.5 ? " (stayed >= 1/2 at every sampled n;"
                              : " (dropped below 1/2 at some sampled n;") +
          " observational only, nothing asserted)");
  return sb.finish();
}

Summary run_uncertainty_curve(const ExperimentConfig& cfg, CsvTable& csv) {
  const std::uint32_t m_max = static_cast<std::uint32_t>(param_u64(cfg, "m_max"));
  csv.header = {"experiment", "trial", "seed", "copies",
                "m",          "delta_n", "delta_k", "product"};
  SummaryBuilder sb;
  sb.line("experiment: uncertainty-curve");
  bool monotone = true;
  double prev = 0.0;
  for (std::uint32_t m = 1; m <= m_max; ++m) {
    const UncertaintyPoint pt = uncertainty_product(m);
    csv.rows.push_back({cfg.experiment, fmt_u(m - 1), fmt_u(cfg.seed),
                        fmt_u(m), fmt_u(m), fmt_f(pt.delta_n),
                        fmt_f(pt.delta_k), fmt_f(pt.product)});
    if (m == 1) sb.stat("product_m1", pt.product);
    if (m == 2) sb.stat("product_m2", pt.product);
    if (m >= 3 && pt.product >= prev) monotone = false;
    prev = pt.product;
  }
  sb.stat("monotone_after_2", monotone ? 1.0 : 0.0);
  sb.stat("final_product", prev);
  sb.line("m=1 product " + fmt_g(std::numbers::pi / 2.0) +
          "; decreasing for m>=2: " + (monotone ? "yes" : "no") +
          "; product at m=" + fmt_u(m_max) + ": " + fmt_g(prev));
  return sb.finish();
}

Summary run_verifier(const ExperimentConfig& cfg, CsvTable& csv) {
  const std::uint64_t m_max = param_u64(cfg, "m_max");
  const double epsilon = require_param(cfg, "epsilon");
  const std::uint64_t trials = cfg.trials;

  csv.header = {"experiment", "trial",        "seed",
                "copies",     "m",            "trials",
                "false_accepts", "false_rate", "expected_rate",
                "z_score",    "correct_rejects"};
  csv.rows.resize(m_max);
  std::vector<double> z_scores(m_max);
  std::vector<std::uint64_t> correct_rejects_all(m_max);

  parallel_for(m_max, cfg.jobs, [&](std::size_t mi) {
    const std::uint64_t m = mi + 1;
    std::uint64_t false_accepts = 0;
    std::uint64_t correct_rejects = 0;
    std::uint64_t copies = 0;
    const std::uint64_t seed0 = derive_seed(cfg.seed, m, 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(cfg.seed, m, 3 * t + 1));
      const double true_k = std::numbers::pi * rng.next_double();
      const PureQubit state =
          make_linear_polarization(PolarizationAngle(true_k));
      CopyBudget budget;
      const VerifyResult wrong =
          verify_claim(state, PolarizationAngle(true_k + epsilon), m,
                       derive_seed(cfg.seed, m, 3 * t + 2), budget);
      if (wrong.accepted) ++false_accepts;
      const VerifyResult right =
          verify_claim(state, PolarizationAngle(true_k), m,
                       derive_seed(cfg.seed, m, 3 * t + 3), budget);
      if (!right.accepted) ++correct_rejects;
      copies += budget.consumed();
    }
    // A claim off by epsilon is falsely accepted with probability
    // cos^{2m}(epsilon); the canonical epsilon = pi/4 gives 2^-m.
    const double c = std::cos(epsilon);
    const double p = std::pow(c * c, static_cast<double>(m));
    const double rate =
        static_cast<double>(false_accepts) / static_cast<double>(trials);
    const double sigma =
        std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    const double z = sigma > 0.0 ? (rate - p) / sigma : (rate == p ? 0.0 : 1e30);
    z_scores[mi] = z;
    correct_rejects_all[mi] = correct_rejects;
    csv.rows[mi] = {cfg.experiment, fmt_u(mi),           fmt_u(seed0),
                    fmt_u(copies),  fmt_u(m),            fmt_u(trials),
                    fmt_u(false_accepts), fmt_f(rate),   fmt_f(p),
                    fmt_f(z),       fmt_u(correct_rejects)};
  });

  SummaryBuilder sb;
  sb.line("experiment: verifier");
  double max_abs_z = 0.0;
  std::uint64_t total_correct_rejects = 0;
  for (std::size_t mi = 0; mi < m_max; ++mi) {
    max_abs_z = std::max(max_abs_z, std::abs(z_scores[mi]));
    total_correct_rejects += correct_rejects_all[mi];
    sb.line("m=" + fmt_u(mi + 1) + ": z=" + fmt_g(z_scores[mi]) +
            " correct_rejects=" + fmt_u(correct_rejects_all[mi]));
  }
  sb.stat("max_abs_z", max_abs_z);
  sb.stat("total_correct_rejects",
          static_cast<double>(total_correct_rejects));
  sb.line("epsilon=" + fmt_g(epsilon) + ": max |z| = " + fmt_g(max_abs_z) +
          ", correct-claim rejections = " + fmt_u(total_correct_rejects));
  return sb.finish();
}

Summary run_clone_fidelity(const ExperimentConfig& cfg, CsvTable& csv) {
  const std::uint64_t trials = cfg.trials;
  csv.header = {"experiment", "trial", "seed", "copies", "overlap_fidelity",
                "trace_fidelity", "overlap_deviation", "trace_deviation",
                "clones_equal"};
  csv.rows.resize(trials);
  std::vector<double> overlap_dev(trials), trace_dev(trials);
  std::atomic<std::uint64_t> equal_count{0};

  const double expected_trace = std::sqrt(5.0 / 6.0);
  parallel_for(trials, cfg.jobs, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(cfg.seed, 0, t);
    Rng rng(seed);
    const PureQubit psi = haar_random_qubit(rng);
    const CloneOutput out = bh_clone(DensityMatrix::pure(psi));
    bool equal = true;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        if (out.clone_a(r, c) != out.clone_b(r, c)) equal = false;
    if (equal) ++equal_count;
    overlap_dev[t] = std::abs(out.input_overlap_fidelity - 5.0 / 6.0);
    trace_dev[t] = std::abs(out.trace_fidelity - expected_trace);
    csv.rows[t] = {cfg.experiment,
                   fmt_u(t),
                   fmt_u(seed),
                   fmt_u(1),
                   fmt_f(out.input_overlap_fidelity),
                   fmt_f(out.trace_fidelity),
                   fmt_f(overlap_dev[t]),
                   fmt_f(trace_dev[t]),
                   equal ? "1" : "0"};
  });

  SummaryBuilder sb;
  sb.line("experiment: clone-fidelity");
  const double max_overlap_dev =
      *std::max_element(overlap_dev.begin(), overlap_dev.end());
  const double max_trace_dev =
      *std::max_element(trace_dev.begin(), trace_dev.end());
  sb.stat("max_overlap_deviation", max_overlap_dev);
  sb.stat("max_trace_deviation", max_trace_dev);
  sb.stat("clones_equal_fraction",
          static_cast<double>(equal_count.load()) / static_cast<double>(trials));
  sb.line("overlap fidelity max deviation from 5/6: " + fmt_g(max_overlap_dev));
  sb.line("trace fidelity max deviation from sqrt(5/6): " +
          fmt_g(max_trace_dev));
  return sb.finish();
}

Summary run_clone_tomography(const ExperimentConfig& cfg, CsvTable& csv) {
  const double true_k = require_param(cfg, "true_k");
  const std::uint64_t m_per_axis = param_u64(cfg, "m_per_axis");
  std::uint64_t n_clones = param_u64(cfg, "n_clones");
  if (n_clones == 0) n_clones = 3 * m_per_axis;
  if (n_clones < 3 * m_per_axis)
    throw config_error("config:1: n_clones must be at least 3 * m_per_axis");
  const std::uint64_t trials = cfg.trials;

  const PureQubit state = make_linear_polarization(PolarizationAngle(true_k));
  const StokesVector truth = stokes_parameters(state);

  csv.header = {"experiment", "trial", "seed",  "copies", "n_clones",
                "m_per_axis", "tx",    "ty",    "tz",     "k_hat",
                "k_error"};
  csv.rows.resize(trials);
  std::vector<double> k_errors(trials), component_errors(trials);

  parallel_for(trials, cfg.jobs, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(cfg.seed, 0, t);
    CopyBudget budget;
    const TomographyResult res =
        clone_then_tomograph(state, n_clones, m_per_axis, seed, budget);
    const auto& e = res.expectation_estimates;
    const double k_hat = wrap_mod_pi(0.5 * std::atan2(e[0], e[2]));
    const double k_err = wrapped_angle_distance(k_hat, true_k);
    // Stokes order: s1 = <Z>, s2 = <X>, s3 = <Y>.
    const double comp_err =
        std::max({std::abs(e[0] - truth.s2), std::abs(e[1] - truth.s3),
                  std::abs(e[2] - truth.s1)});
    k_errors[t] = k_err;
    component_errors[t] = comp_err;
    csv.rows[t] = {cfg.experiment, fmt_u(t),        fmt_u(seed),
                   fmt_u(budget.consumed()),        fmt_u(n_clones),
                   fmt_u(m_per_axis),               fmt_f(e[0]),
                   fmt_f(e[1]),    fmt_f(e[2]),     fmt_f(k_hat),
                   fmt_f(k_err)};
  });

  SummaryBuilder sb;
  sb.line("experiment: clone-tomography");
  const double max_k_error =
      *std::max_element(k_errors.begin(), k_errors.end());
  const double max_component_error =
      *std::max_element(component_errors.begin(), component_errors.end());
  sb.stat("max_k_error", max_k_error);
  sb.stat("max_component_error", max_component_error);
  sb.stat("originals_charged_per_trial", 1.0);
  sb.line("true k=" + fmt_g(wrap_mod_pi(true_k)) + ", m_per_axis=" +
          fmt_u(m_per_axis) + ": max k error " + fmt_g(max_k_error) +
          ", max de-shrunk component error " + fmt_g(max_component_error));
  return sb.finish();
}

Summary run_wigner(const ExperimentConfig& cfg, CsvTable& csv) {
  const complexd alpha0(require_param(cfg, "alpha_re"),
                        require_param(cfg, "alpha_im"));
  const std::uint64_t n_per_angle = param_u64(cfg, "n_per_angle");
  const std::size_t theta_bins =
      static_cast<std::size_t>(param_u64(cfg, "theta_bins"));
  const double k_c = require_param(cfg, "k_c");
  const double extent = require_param(cfg, "grid_extent");
  const double step = require_param(cfg, "grid_step");
  const std::size_t x_bins = static_cast<std::size_t>(param_u64(cfg, "x_bins"));

  const Sinogram sg = sample_quadratures(alpha0, n_per_angle, theta_bins,
                                         derive_seed(cfg.seed, 0, 0), x_bins);
  const GridSpec spec = GridSpec::symmetric(extent, step);
  const WignerGrid rec = inverse_radon(sg, k_c, spec);
  const WignerGrid truth = analytic_wigner_coherent(alpha0, spec);

  csv.header = {"experiment", "trial", "seed", "copies", "q", "p",
                "w_rec",      "w_true", "abs_error"};
  csv.rows.reserve(rec.q_axis.size() * rec.p_axis.size());
  double max_err = 0.0, peak = -1e300, peak_q = 0.0, peak_p = 0.0;
  std::uint64_t idx = 0;
  const std::uint64_t copies = n_per_angle * theta_bins;
  for (std::size_t iq = 0; iq < rec.q_axis.size(); ++iq)
    for (std::size_t ip = 0; ip < rec.p_axis.size(); ++ip) {
      const double w = rec.value(iq, ip);
      const double wt = truth.value(iq, ip);
      const double err = std::abs(w - wt);
      max_err = std::max(max_err, err);
      if (w > peak) {
        peak = w;
        peak_q = rec.q_axis[iq];
        peak_p = rec.p_axis[ip];
      }
      csv.rows.push_back({cfg.experiment, fmt_u(idx++), fmt_u(cfg.seed),
                          fmt_u(copies), fmt_f(rec.q_axis[iq]),
                          fmt_f(rec.p_axis[ip]), fmt_f(w), fmt_f(wt),
                          fmt_f(err)});
    }

  SummaryBuilder sb;
  sb.line("experiment: wigner");
  sb.stat("max_abs_error", max_err);
  sb.stat("max_error_times_pi", max_err * std::numbers::pi);
  sb.stat("integral", rec.integral());
  sb.stat("peak_q", peak_q);
  sb.stat("peak_p", peak_p);
  sb.stat("peak_value", peak);
  sb.line("max |W_rec - W_true| = " + fmt_g(max_err) + " (" +
          fmt_g(max_err * std::numbers::pi) + " of the vacuum peak 1/pi)");
  sb.line("grid integral = " + fmt_g(rec.integral()) + "; peak at (" +
          fmt_g(peak_q) + ", " + fmt_g(peak_p) + ")");
  return sb.finish();
}

Summary run_number_phase(const ExperimentConfig& cfg, CsvTable& csv) {
  const double alpha_start = require_param(cfg, "alpha_start");
  const double alpha_stop = require_param(cfg, "alpha_stop");
  const double alpha_step = require_param(cfg, "alpha_step");
  const std::size_t dim = static_cast<std::size_t>(param_u64(cfg, "dim"));
  if (alpha_stop < alpha_start)
    throw config_error("config:1: alpha_stop must be >= alpha_start");

  const OscillatorOperators ops = oscillator_operators(dim);
  csv.header = {"experiment", "trial",  "seed",        "copies",
                "alpha",      "dim",    "mean_n",      "delta_n",
                "mean_phase", "delta_theta", "product"};

  SummaryBuilder sb;
  sb.line("experiment: number-phase");
  double min_product = std::numeric_limits<double>::infinity();
  std::uint64_t idx = 0;
  for (double alpha = alpha_start; alpha <= alpha_stop + 1e-9;
       alpha += alpha_step) {
    const FockVector psi = coherent_state(complexd(alpha, 0.0), dim);
    const double mean_n = expectation(ops.n, psi).real();
    const double delta_n = std::sqrt(variance(ops.n, psi));
    const PhaseStatistics ph = phase_statistics(psi);
    const double product = delta_n * ph.delta_theta;
    min_product = std::min(min_product, product);
    csv.rows.push_back({cfg.experiment, fmt_u(idx++), fmt_u(cfg.seed),
                        fmt_u(0), fmt_f(alpha), fmt_u(dim), fmt_f(mean_n),
                        fmt_f(delta_n), fmt_f(ph.mean_phase),
                        fmt_f(ph.delta_theta), fmt_f(product)});
    sb.line("alpha=" + fmt_g(alpha) + ": delta_n=" + fmt_g(delta_n) +
            " delta_theta=" + fmt_g(ph.delta_theta) + " product=" +
            fmt_g(product));
    if (std::abs(alpha - 4.0) < 1e-9) {
      sb.stat("delta_n_alpha4", delta_n);
      sb.stat("product_alpha4", product);
    }
  }
  sb.stat("min_product", min_product);
  sb.line("minimum product over the alpha grid: " + fmt_g(min_product));
  return sb.finish();
}

Summary run_complexity_profile(const ExperimentConfig& cfg, CsvTable& csv) {
  const auto it = cfg.text_params.find("estimator");
  const std::string estimator_name =
      it == cfg.text_params.end() ? "mle" : it->second;
  EstimatorKind kind;
  if (estimator_name == "bisection")
    kind = EstimatorKind::bisection;
  else if (estimator_name == "mle")
    kind = EstimatorKind::mle;
  else if (estimator_name == "tomography")
    kind = EstimatorKind::tomography;
  else if (estimator_name == "exact_oracle")
    kind = EstimatorKind::exact_oracle;
  else if (estimator_name == "probabilistic_oracle")
    kind = EstimatorKind::probabilistic_oracle;
  else
    throw config_error(
        "config:1: estimator must be one of bisection, mle, tomography, "
        "exact_oracle, probabilistic_oracle");

  const std::uint64_t target_count = param_u64(cfg, "target_count");
  const double target_start = require_param(cfg, "target_start");
  const double target_decay = require_param(cfg, "target_decay");
  const bool pow2 = param_u64(cfg, "targets_pow2") != 0;
  ComplexityOptions options;
  options.oracle_sigma = require_param(cfg, "oracle_sigma");
  options.copy_cap = param_u64(cfg, "copy_cap");

  std::vector<double> targets(target_count);
  for (std::size_t i = 0; i < target_count; ++i)
    targets[i] = pow2 ? std::ldexp(std::numbers::pi, -static_cast<int>(i + 1))
                      : target_start * std::pow(target_decay,
                                                static_cast<double>(i));

  const std::vector<ComplexityPoint> profile =
      complexity_profile(kind, targets, cfg.trials, cfg.seed, options);

  csv.header = {"experiment", "trial", "seed",      "copies",
                "target",     "min_copies", "saturated", "median_error"};
  SummaryBuilder sb;
  sb.line("experiment: complexity-profile (" + estimator_name + ")");
  bool any_saturated = false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const ComplexityPoint& pt = profile[i];
    csv.rows.push_back({cfg.experiment, fmt_u(i), fmt_u(cfg.seed),
                        fmt_u(pt.min_copies), fmt_f(pt.target),
                        fmt_u(pt.min_copies), pt.saturated ? "1" : "0",
                        fmt_f(pt.median_error)});
    sb.stat("min_copies_" + fmt_u(i), static_cast<double>(pt.min_copies));
    any_saturated = any_saturated || pt.saturated;
    sb.line("target " + fmt_g(pt.target) + ": min copies " +
            fmt_u(pt.min_copies) + (pt.saturated ? " (saturated)" : "") +
            ", median error " + fmt_g(pt.median_error));
  }
  sb.stat("any_saturated", any_saturated ? 1.0 : 0.0);
  return sb.finish();
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const ExperimentSpec& spec : experiment_specs()) v.push_back(spec.name);
    return v;
  }();
  return names;
}

ExperimentConfig parse_config_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("config:" + std::to_string(line_of_offset(text, e.byte)) +
                       ": " + e.what());
  }
  if (!doc.is_object())
    throw config_error("config:1: top-level JSON value must be an object");

  ExperimentConfig cfg;
  bool have_experiment = false;
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") {
      if (!value.is_string()) fail_at(text, key, "experiment must be a string");
      cfg.experiment = value.get<std::string>();
      have_experiment = true;
    } else if (key == "seed") {
      if (!value.is_number_integer() && !value.is_number_unsigned())
        fail_at(text, key, "seed must be an integer");
      if (value.is_number_integer() && value.get<std::int64_t>() < 0)
        fail_at(text, key, "seed must be >= 0");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "trials") {
      if (!value.is_number_unsigned() ||
          value.get<std::uint64_t>() == 0)
        fail_at(text, key, "trials must be a positive integer");
      cfg.trials = value.get<std::uint64_t>();
    } else if (key == "jobs") {
      if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0 ||
          value.get<std::uint64_t>() > 256)
        fail_at(text, key, "jobs must be an integer in 1..256");
      cfg.jobs = static_cast<std::size_t>(value.get<std::uint64_t>());
    } else if (value.is_string()) {
      cfg.text_params[key] = value.get<std::string>();
    } else if (value.is_boolean()) {
      cfg.params[key] = value.get<bool>() ? 1.0 : 0.0;
    } else if (value.is_number()) {
      cfg.params[key] = value.get<double>();
    } else {
      fail_at(text, key, "parameter '" + key + "' must be a number or string");
    }
  }

  if (!have_experiment)
    throw config_error("config:1: missing required key 'experiment'");

  const ExperimentSpec* spec = find_spec(cfg.experiment);
  if (spec == nullptr) {
    std::string names;
    for (const std::string& n : experiment_names())
      names += (names.empty() ? "" : ", ") + n;
    fail_at(text, "experiment",
            "unknown experiment '" + cfg.experiment + "' (expected one of " +
                names + ")");
  }

  if (!doc.contains("trials")) cfg.trials = spec->default_trials;

  for (const auto& [key, value] : cfg.params) {
    const ParamSpec* ps = nullptr;
    for (const ParamSpec& candidate : spec->params)
      if (key == candidate.key) ps = &candidate;
    if (ps == nullptr)
      fail_at(text, key,
              "unknown parameter '" + key + "' for experiment '" +
                  cfg.experiment + "'");
    if (value < ps->min || value > ps->max)
      fail_at(text, key,
              "parameter '" + key + "' out of range [" + fmt_g(ps->min) +
                  ", " + fmt_g(ps->max) + "]");
    if (ps->integer && std::floor(value) != value)
      fail_at(text, key, "parameter '" + key + "' must be an integer");
  }
  for (const auto& [key, value] : cfg.text_params) {
    bool known = false;
    for (const char* tk : spec->text_keys)
      if (key == tk) known = true;
    if (!known)
      fail_at(text, key,
              "unknown parameter '" + key + "' for experiment '" +
                  cfg.experiment + "'");
    (void)value;
  }
  for (const ParamSpec& ps : spec->params)
    if (!cfg.params.count(ps.key)) cfg.params[ps.key] = ps.def;

  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config:1: cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_hash(const ExperimentConfig& config) {
  std::ostringstream canon;
  canon << config.experiment << '\n'
        << config.seed << '\n'
        << config.trials << '\n';
  for (const auto& [key, value] : config.params)
    canon << key << '=' << fmt_f(value) << '\n';
  for (const auto& [key, value] : config.text_params)
    canon << key << '=' << value << '\n';
  const std::string s = canon.str();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

LogLogFit fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog: need >= 2 matched points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("fit_loglog: points must be positive");
    lx[i] = std::log10(x[i]);
    ly[i] = std::log10(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double nd = static_cast<double>(n);
  const double denom = nd * sxx - sx * sx;
  LogLogFit fit;
  fit.slope = (nd * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / nd;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.slope * lx[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / nd);
  return fit;
}

double median_of(std::vector<double> values) {
  if (values.empty())
    throw std::invalid_argument("median_of: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t half = values.size() / 2;
  return values.size() % 2 == 1 ? values[half]
                                : 0.5 * (values[half - 1] + values[half]);
}

namespace {

std::string render_csv(const ExperimentConfig& cfg, const CsvTable& table) {
  std::ostringstream out;
  out << "# qmclab " << kToolVersion << " config=" << config_hash(cfg)
      << " experiment=" << cfg.experiment << " seed=" << cfg.seed << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

Summary run_experiment(const ExperimentConfig& config,
                       const std::string& out_dir) {
  using Runner = Summary (*)(const ExperimentConfig&, CsvTable&);
  static const std::map<std::string, Runner> runners = {
      {"tomography-scaling", run_tomography_scaling},
      {"bisection", run_bisection},
      {"mle-scaling", run_mle_scaling},
      {"uncertainty-curve", run_uncertainty_curve},
      {"verifier", run_verifier},
      {"clone-fidelity", run_clone_fidelity},
      {"clone-tomography", run_clone_tomography},
      {"wigner", run_wigner},
      {"number-phase", run_number_phase},
      {"complexity-profile", run_complexity_profile},
  };
  const auto it = runners.find(config.experiment);
  if (it == runners.end())
    throw config_error("config:1: unknown experiment '" + config.experiment +
                       "'");

  CsvTable table;
  Summary summary = it->second(config, table);

  std::ostringstream header;
  header << "qmclab " << kToolVersion << "  config " << config_hash(config)
         << "  seed " << config.seed << "  trials " << config.trials << "\n";
  summary.text = header.str() + summary.text;

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (config.experiment + ".csv"), render_csv(config, table));
  write_file(dir / (config.experiment + ".summary.txt"), summary.text);
  return summary;
}

}  // namespace qmclab
