#include "eitsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace eitsim {

const std::vector<std::string> kScenarioNames = {
    "cooling",          "lz_oscillation",      "damped_oscillation",
    "switch_off_sudden", "switch_off_adiabatic", "stationary"};

const std::vector<std::string> kSweepAxes = {"gamma", "n_in", "g2",
                                             "eta",   "t_off", "delta_t"};

int RunConfig::resolved_n_max() const {
  if (n_max > 0) return n_max;
  return std::max(n_in + 12, 15);
}

ModelParams RunConfig::params() const {
  return ModelParams::from_paper_units(g1, g2, delta, gamma, omega, eta,
                                       resolved_n_max());
}

void RunConfig::validate() const {
  if (std::find(kScenarioNames.begin(), kScenarioNames.end(), scenario) ==
      kScenarioNames.end())
    throw config_error("unknown scenario '" + scenario + "'");
  if (n_in < 0) throw config_error("n_in must be >= 0");
  if (!(t_end > 0.0)) throw config_error("t_end must be > 0");
  if (resolved_n_max() < n_in + 8)
    throw config_error("n_max must leave a truncation margin of at least 8 "
                       "levels above n_in");
  try {
    const ModelParams p = params();
    schedule.validate();
    integrator.validate(p);
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  for (double t : heatmap_times)
    if (t < 0.0) throw config_error("heatmap times must be >= 0");
}

RunConfig preset(const std::string& scenario) {
  RunConfig c;
  c.scenario = scenario;
  if (scenario == "lz_oscillation") {
    c.gamma = 0.0;
    c.n_in = 3;
    c.t_end = 520.0;
  } else if (scenario == "damped_oscillation") {
    c.gamma = 0.1;
    c.n_in = 3;
    c.t_end = 1030.0;
    c.do_fit = true;
  } else if (scenario == "cooling") {
    c.gamma = 0.6;
    c.n_in = 4;
    c.t_end = 3200.0;
  } else if (scenario == "switch_off_sudden") {
    c.gamma = 0.2;
    c.n_in = 3;
    c.t_end = 260.0;
    c.schedule.mode = Schedule::Mode::ramp;
    c.schedule.t_off = 128.0;  // first negativity maximum of the damped run
    c.schedule.delta_t = 1.0;
  } else if (scenario == "switch_off_adiabatic") {
    c.gamma = 0.2;
    c.n_in = 3;
    c.t_end = 310.0;
    c.schedule.mode = Schedule::Mode::ramp;
    c.schedule.t_off = 128.0;
    c.schedule.delta_t = 50.0;
  } else if (scenario == "stationary") {
    c.gamma = 0.2;
    c.n_in = 2;
    c.t_end = 400.0;
    c.integrator.to_stationary = true;
  } else {
    throw config_error("unknown scenario '" + scenario + "'");
  }
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw config_error("value for '" + key + "' is not a number: '" + v + "'");
  }
  if (pos != v.size())
    throw config_error("value for '" + key + "' is not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x))
    throw config_error("value for '" + key + "' must be an integer: '" + v + "'");
  return int(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error("value for '" + key + "' must be a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(key, item));
  }
  return out;
}

}  // namespace

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::string line, section;
  int lineno = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(path + ":" + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      any = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    any = true;

    if (key == "model.g1") config.g1 = to_double(key, value);
    else if (key == "model.g2") config.g2 = to_double(key, value);
    else if (key == "model.delta") config.delta = to_double(key, value);
    else if (key == "model.gamma") config.gamma = to_double(key, value);
    else if (key == "model.omega") config.omega = to_double(key, value);
    else if (key == "model.eta") config.eta = to_double(key, value);
    else if (key == "model.n_max") config.n_max = to_int(key, value);
    else if (key == "run.scenario") config.scenario = value;
    else if (key == "run.n_in") config.n_in = to_int(key, value);
    else if (key == "run.t_end") config.t_end = to_double(key, value);
    else if (key == "run.fit") config.do_fit = to_bool(key, value);
    else if (key == "run.fit_t_min") config.fit_window.t_min = to_double(key, value);
    else if (key == "run.fit_t_max") config.fit_window.t_max = to_double(key, value);
    else if (key == "schedule.mode") {
      if (value == "constant") config.schedule.mode = Schedule::Mode::constant;
      else if (value == "ramp") config.schedule.mode = Schedule::Mode::ramp;
      else throw config_error("schedule.mode must be 'constant' or 'ramp'");
    }
    else if (key == "schedule.t_off") config.schedule.t_off = to_double(key, value);
    else if (key == "schedule.delta_t") config.schedule.delta_t = to_double(key, value);
    else if (key == "integrator.method") {
      if (value == "rk4") config.integrator.method = IntegratorConfig::Method::rk4;
      else if (value == "propagator")
        config.integrator.method = IntegratorConfig::Method::precomputed_propagator;
      else throw config_error("integrator.method must be 'rk4' or 'propagator'");
    }
    else if (key == "integrator.dt") config.integrator.dt = to_double(key, value);
    else if (key == "integrator.sample_every")
      config.integrator.sample_every = to_int(key, value);
    else if (key == "integrator.to_stationary")
      config.integrator.to_stationary = to_bool(key, value);
    else if (key == "integrator.rhs_tol")
      config.integrator.stationary_rhs_tol = to_double(key, value);
    else if (key == "integrator.t_cap") config.integrator.t_cap = to_double(key, value);
    else if (key == "output.dir") config.out_dir = value;
    else if (key == "output.heatmap_times") config.heatmap_times = to_list(key, value);
    else
      throw config_error(path + ":" + std::to_string(lineno) + ": unknown key '" +
                         key + "'");
  }
  if (!any) throw config_error("config file '" + path + "' is empty");
}

}  // namespace eitsim
