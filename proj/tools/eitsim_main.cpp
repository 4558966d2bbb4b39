// Command-line driver: scenario presets, config files, parameter sweeps.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "eitsim/scenarios.hpp"

namespace {

// "AXIS=v1,v2,..." -> (axis, values)
std::pair<std::string, std::vector<double>> parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw eitsim::config_error("--sweep expects AXIS=v1,v2,...");
  std::pair<std::string, std::vector<double>> out;
  out.first = spec.substr(0, eq);
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.second.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw eitsim::config_error("--sweep value is not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EIT-cooling master-equation simulator"};

  std::string config_path, scenario, sweep_spec, out_dir, method, heatmap_spec;
  double dt = -1.0, t_end = -1.0;
  int nmax = 0, n_in = -1, jobs = 0;

  app.add_option("--config", config_path, "configuration file (key = value sections)");
  app.add_option("--scenario", scenario,
                 "preset: cooling | lz_oscillation | damped_oscillation | "
                 "switch_off_sudden | switch_off_adiabatic | stationary");
  app.add_option("--sweep", sweep_spec,
                 "sweep one axis, e.g. gamma=0.1,0.2,0.6,6 "
                 "(axes: gamma n_in g2 eta t_off delta_t)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--dt", dt, "integrator step in us (default: stability-based)");
  app.add_option("--nmax", nmax, "vibrational truncation n_max");
  app.add_option("--heatmap-times", heatmap_spec,
                 "comma-separated times (us) for |rho| snapshots");
  app.add_option("--t-end", t_end, "simulation end time in us");
  app.add_option("--n-in", n_in, "initial vibrational quantum number");
  app.add_option("--method", method, "integration method: rk4 | propagator");
  app.add_option("--jobs", jobs, "worker threads for sweeps (default: cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return eitsim::exit_config_error;
  }

  try {
    // precedence: preset defaults < config file < command-line flags
    eitsim::RunConfig config;
    if (!scenario.empty()) config = eitsim::preset(scenario);
    if (!config_path.empty()) {
      eitsim::RunConfig probe;  // the file may itself select the scenario
      eitsim::apply_config_file(probe, config_path);
      if (scenario.empty()) config = eitsim::preset(probe.scenario);
      eitsim::apply_config_file(config, config_path);
      if (!scenario.empty()) config.scenario = scenario;
    }
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (dt >= 0.0) config.integrator.dt = dt;
    if (nmax > 0) config.n_max = nmax;
    if (t_end > 0.0) config.t_end = t_end;
    if (n_in >= 0) config.n_in = n_in;
    if (!method.empty()) {
      if (method == "rk4")
        config.integrator.method = eitsim::IntegratorConfig::Method::rk4;
      else if (method == "propagator")
        config.integrator.method =
            eitsim::IntegratorConfig::Method::precomputed_propagator;
      else
        throw eitsim::config_error("--method must be 'rk4' or 'propagator'");
    }
    if (!heatmap_spec.empty()) {
      config.heatmap_times.clear();
      std::stringstream ss(heatmap_spec);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) config.heatmap_times.push_back(std::stod(item));
    }

    if (!sweep_spec.empty()) {
      const auto [axis, values] = parse_sweep(sweep_spec);
      return eitsim::sweep(config, axis, values, jobs);
    }
    return eitsim::run_scenario(config);
  } catch (const eitsim::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return eitsim::exit_config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return eitsim::exit_config_error;
  }
}
