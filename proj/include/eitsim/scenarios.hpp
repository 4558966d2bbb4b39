#pragma once

#include "eitsim/config.hpp"

namespace eitsim {

/// Process exit codes, one per error class.
enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 2,
  exit_truncation_breach = 3,
  exit_tolerance_breach = 4,
  exit_fit_failure = 5,
};

struct RunResult {
  TimeSeries series;
  LZFit fit;            ///< valid when fit_done
  bool fit_done = false;
  double stationary_rhs_norm = -1.0;
  std::string out_dir;
};

/// Runs one configuration and writes timeseries.csv, summary.json and any
/// requested heatmap snapshots under config.out_dir. Throws on failure
/// (config_error, truncation_error, tolerance_error, fit_error).
RunResult execute_run(const RunConfig& config);

/// execute_run with errors mapped to the documented exit codes; messages go
/// to stderr.
int run_scenario(const RunConfig& config);

/// Runs the template once per axis value (worker pool, one output directory
/// per point) and aggregates the per-point summaries into
/// <out_dir>/sweep_<axis>.csv. Returns the first nonzero point exit code,
/// or 0 when every point succeeded.
int sweep(const RunConfig& config_template, const std::string& axis,
          const std::vector<double>& values, int jobs = 0);

}  // namespace eitsim
