#include "eitsim/scenarios.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <json.hpp>

namespace eitsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_timeseries_csv(const TimeSeries& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t_us,negativity,mean_n,emission_rate,photon_count,fidelity,"
         "trace_drift,min_eig,tail_pop\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out << fmt(ts.t[i]) << ',' << fmt(ts.negativity[i]) << ',' << fmt(ts.mean_n[i])
        << ',' << fmt(ts.emission_rate[i]) << ',' << fmt(ts.photon_count[i]) << ','
        << fmt(ts.fidelity[i]) << ',' << fmt(ts.trace_drift[i]) << ','
        << fmt(ts.min_eig[i]) << ',' << fmt(ts.tail_pop[i]) << '\n';
  }
}

const char* damping_name(DampingClass c) {
  switch (c) {
    case DampingClass::underdamped: return "underdamped";
    case DampingClass::overdamped: return "overdamped";
    default: return "critical";
  }
}

json summary_json(const RunConfig& config, const RunResult& result,
                  const PhotonCount& photons, const json& heatmaps,
                  const LZFit* failed_fit) {
  const TimeSeries& ts = result.series;
  const std::size_t last = ts.size() - 1;
  json j;
  j["scenario"] = config.scenario;
  j["params_2pi_MHz"] = {{"g1", config.g1},       {"g2", config.g2},
                         {"delta", config.delta}, {"gamma", config.gamma},
                         {"omega", config.omega}};
  j["eta"] = config.eta;
  j["n_max"] = config.resolved_n_max();
  j["n_in"] = config.n_in;
  j["schedule"] = {
      {"mode", config.schedule.mode == Schedule::Mode::ramp ? "ramp" : "constant"},
      {"t_off", config.schedule.t_off},
      {"delta_t", config.schedule.delta_t}};
  j["final"] = {{"t_us", ts.t[last]},
                {"negativity", ts.negativity[last]},
                {"mean_n", ts.mean_n[last]},
                {"emission_rate", ts.emission_rate[last]},
                {"photon_count", ts.photon_count[last]},
                {"fidelity", ts.fidelity[last]},
                {"trace_drift", ts.trace_drift[last]},
                {"min_eig", ts.min_eig[last]},
                {"tail_pop", ts.tail_pop[last]}};
  j["photon_crossings_us"] = photons.crossing_times;
  if (result.fit_done) {
    j["fit"] = {{"delta_e_fit", result.fit.delta_e},
                {"gamma1_fit", result.fit.gamma1},
                {"residual", result.fit.residual},
                {"classification", damping_name(result.fit.classification)},
                {"converged", result.fit.converged}};
  } else if (failed_fit != nullptr) {
    j["fit"] = {{"delta_e_fit", failed_fit->delta_e},
                {"gamma1_fit", failed_fit->gamma1},
                {"residual", failed_fit->residual},
                {"classification", damping_name(failed_fit->classification)},
                {"converged", false}};
  }
  if (config.integrator.to_stationary)
    j["stationary"] = {{"reached", result.stationary_rhs_norm >= 0.0},
                       {"rhs_norm", result.stationary_rhs_norm}};
  if (!heatmaps.empty()) j["heatmaps"] = heatmaps;
  return j;
}

}  // namespace

RunResult execute_run(const RunConfig& config) {
  config.validate();
  const ModelParams params = config.params();
  const TruncatedSpace space = params.space();

  RunResult result;
  result.out_dir = config.out_dir;
  fs::create_directories(config.out_dir);

  // heatmap snapshots at the first sample past each requested time
  std::vector<double> wanted = config.heatmap_times;
  std::sort(wanted.begin(), wanted.end());
  std::size_t next_snapshot = 0;
  json heatmaps = json::array();
  std::vector<SampleObserver> observers;
  if (!wanted.empty()) {
    observers.push_back([&](double t, const complex_matrix& rho) {
      while (next_snapshot < wanted.size() && t >= wanted[next_snapshot] - 1e-9) {
        char name[64];
        std::snprintf(name, sizeof name, "heatmap_t%g.csv", wanted[next_snapshot]);
        const std::string file = (fs::path(config.out_dir) / name).string();
        heatmap_export(rho, space, file);
        heatmaps.push_back({{"requested_t", wanted[next_snapshot]},
                            {"sample_t", t},
                            {"file", name}});
        ++next_snapshot;
      }
    });
  }

  complex_matrix last_rho;
  double last_t = 0.0;
  observers.push_back([&](double t, const complex_matrix& rho) {
    last_rho = rho;
    last_t = t;
  });

  const DensityMatrix rho0 = initial_state(params, config.n_in);
  result.series =
      integrate(rho0, config.t_end, params, config.schedule, config.integrator, observers);

  if (config.integrator.to_stationary)
    result.stationary_rhs_norm = rhs(last_rho, last_t, params, config.schedule).norm();

  const PhotonCount photons = photon_count(result.series);

  const LZFit* failed_fit = nullptr;
  LZFit failed_storage;
  if (config.do_fit) {
    try {
      result.fit = fit_lz(result.series, config.fit_window);
      result.fit_done = true;
    } catch (const fit_error& e) {
      failed_storage = e.best;
      failed_fit = &failed_storage;
      write_timeseries_csv(result.series,
                           (fs::path(config.out_dir) / "timeseries.csv").string());
      const json j = summary_json(config, result, photons, heatmaps, failed_fit);
      std::ofstream(fs::path(config.out_dir) / "summary.json") << j.dump(2) << "\n";
      throw;
    }
  }

  write_timeseries_csv(result.series,
                       (fs::path(config.out_dir) / "timeseries.csv").string());
  const json j = summary_json(config, result, photons, heatmaps, nullptr);
  std::ofstream(fs::path(config.out_dir) / "summary.json") << j.dump(2) << "\n";
  return result;
}

int run_scenario(const RunConfig& config) {
  try {
    execute_run(config);
    return exit_ok;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const truncation_error& e) {
    std::cerr << "truncation breach: " << e.what() << "\n";
    return exit_truncation_breach;
  } catch (const tolerance_error& e) {
    std::cerr << "tolerance breach: " << e.what() << "\n";
    return exit_tolerance_breach;
  } catch (const fit_error& e) {
    std::cerr << "fit failure: " << e.what() << "\n";
    return exit_fit_failure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config_error;
  }
}

int sweep(const RunConfig& config_template, const std::string& axis,
          const std::vector<double>& values, int jobs) {
  if (std::find(kSweepAxes.begin(), kSweepAxes.end(), axis) == kSweepAxes.end()) {
    std::cerr << "config error: unknown sweep axis '" << axis << "'\n";
    return exit_config_error;
  }
  if (values.empty()) {
    std::cerr << "config error: sweep needs at least one value\n";
    return exit_config_error;
  }

  struct Point {
    RunConfig config;
    int code = exit_ok;
    json summary;
  };
  std::vector<Point> points(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunConfig c = config_template;
    const double v = values[i];
    if (axis == "gamma") c.gamma = v;
    else if (axis == "n_in") c.n_in = int(v);
    else if (axis == "g2") c.g2 = v;
    else if (axis == "eta") c.eta = v;
    else if (axis == "t_off") c.schedule.t_off = v;
    else if (axis == "delta_t") c.schedule.delta_t = v;
    char sub[64];
    std::snprintf(sub, sizeof sub, "%s_%g", axis.c_str(), v);
    c.out_dir = (fs::path(config_template.out_dir) / sub).string();
    points[i].config = c;
  }

  if (jobs <= 0)
    jobs = int(std::min<std::size_t>(values.size(),
                                     std::max(1u, std::thread::hardware_concurrency())));
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) return;
      points[i].code = run_scenario(points[i].config);
      const fs::path summary = fs::path(points[i].config.out_dir) / "summary.json";
      if (fs::exists(summary)) {
        std::ifstream in(summary);
        in >> points[i].summary;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  fs::create_directories(config_template.out_dir);
  const fs::path agg = fs::path(config_template.out_dir) / ("sweep_" + axis + ".csv");
  std::ofstream out(agg);
  out << axis
      << ",exit_code,final_negativity,final_mean_n,final_fidelity,final_photon_count,"
         "delta_e_fit,gamma1_fit,classification\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const json& s = points[i].summary;
    char axis_value[32];
    std::snprintf(axis_value, sizeof axis_value, "%g", values[i]);
    out << axis_value << ',' << points[i].code;
    if (s.contains("final")) {
      out << ',' << fmt(s["final"]["negativity"].get<double>()) << ','
          << fmt(s["final"]["mean_n"].get<double>()) << ','
          << fmt(s["final"]["fidelity"].get<double>()) << ','
          << fmt(s["final"]["photon_count"].get<double>());
    } else {
      out << ",,,,";
    }
    if (s.contains("fit")) {
      out << ',' << fmt(s["fit"]["delta_e_fit"].get<double>()) << ','
          << fmt(s["fit"]["gamma1_fit"].get<double>()) << ','
          << s["fit"]["classification"].get<std::string>();
    } else {
      out << ",,,";
    }
    out << '\n';
  }

  for (const auto& p : points)
    if (p.code != exit_ok) return p.code;
  return exit_ok;
}

}  // namespace eitsim
