// Experiment harness: JSON config parsing with strict key validation,
// deterministic seeded experiment runners, CSV record output, and summary
// statistics. (config, seed) fully determines every output byte; trials may
// run on a worker pool, with records sorted by trial index before writing.
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmclab {

inline constexpr const char* kToolVersion = "0.1.0";

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parsed and validated run description. `params` holds the
// experiment-specific numeric table; unknown keys are rejected at parse time
// and every value is range-checked before any sampling starts.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  std::size_t jobs = 1;
  std::map<std::string, double> params;
  std::map<std::string, std::string> text_params;
};

const std::vector<std::string>& experiment_names();

// Parses a JSON config document. Throws config_error with a line-numbered
// diagnostic on malformed JSON, unknown keys, or invalid parameter values.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// FNV-1a over the canonicalized config, echoed in the CSV comment line so a
// result file can be matched to the exact configuration that produced it.
std::string config_hash(const ExperimentConfig& config);

// Headline statistics consumed by tests plus the human-readable text block
// written to <out>/<experiment>.summary.txt.
struct Summary {
  std::map<std::string, double> stats;
  std::string text;
};

// Runs the configured experiment and writes <experiment>.csv and
// <experiment>.summary.txt under out_dir. CSV layout: one '#' comment line
// (tool version and config hash), one header row, one row per record;
// floats with 17 significant digits, LF line endings.
Summary run_experiment(const ExperimentConfig& config,
                       const std::string& out_dir);

// Least-squares slope/intercept of log10(y) against log10(x), with RMS
// residual; used for the tomography and MLE scaling fits.
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
LogLogFit fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y);

double median_of(std::vector<double> values);

}  // namespace qmclab
