#pragma once

#include <string>
#include <vector>

#include "eitsim/lindblad_engine.hpp"
#include "eitsim/lz_analytic.hpp"

namespace eitsim {

/// Bad or missing configuration input (maps to exit code 2).
class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One fully specified run. Frequencies are stored as entered, in units of
/// 2*pi MHz (the convention of the figure captions); params() performs the
/// single conversion to rad/us.
struct RunConfig {
  // [model]
  double g1 = 1.34;
  double g2 = 0.134;
  double delta = 15.0;
  double gamma = 0.2;
  double omega = 0.03;
  double eta = 0.1;
  int n_max = -1;  ///< -1: default max(n_in + 12, 15)

  // [run]
  std::string scenario = "damped_oscillation";
  int n_in = 3;
  double t_end = 600.0;
  bool do_fit = false;
  FitWindow fit_window;

  // [schedule]
  Schedule schedule;

  // [integrator]
  IntegratorConfig integrator;

  // [output]
  std::string out_dir = "out";
  std::vector<double> heatmap_times;

  int resolved_n_max() const;
  ModelParams params() const;
  void validate() const;  ///< throws config_error
};

extern const std::vector<std::string> kScenarioNames;
extern const std::vector<std::string> kSweepAxes;

/// Built-in parameter sets reproducing the reference runs; throws
/// config_error for an unknown name.
RunConfig preset(const std::string& scenario);

/// Applies `key = value` pairs from a sectioned flat config file on top of
/// an existing configuration. '#' starts a comment. Unknown keys and
/// malformed lines raise config_error.
void apply_config_file(RunConfig& config, const std::string& path);

}  // namespace eitsim
