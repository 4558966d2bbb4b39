#include "eitsim/lz_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace eitsim {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double sinhc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& t,
                                      const std::vector<double>& y, double floor) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > floor) peaks.push_back(i);
  return peaks;
}

DampingClass classify(double delta_e, double gamma1) {
  const double margin = 1e-9 * std::max(delta_e, gamma1);
  if (std::abs(delta_e - 0.5 * gamma1) <= margin) return DampingClass::critical;
  return delta_e > 0.5 * gamma1 ? DampingClass::underdamped : DampingClass::overdamped;
}

}  // namespace

double negativity_lz(double t, double delta_e) {
  if (delta_e <= 0.0) throw std::invalid_argument("negativity_lz: delta_e must be > 0");
  if (t < 0.0) throw std::invalid_argument("negativity_lz: t must be >= 0");
  return 0.5 * std::abs(std::sin(delta_e * t));
}

double negativity_lz_damped(double t, double delta_e, double gamma1) {
  if (delta_e <= 0.0)
    throw std::invalid_argument("negativity_lz_damped: delta_e must be > 0");
  if (gamma1 < 0.0)
    throw std::invalid_argument("negativity_lz_damped: gamma1 must be >= 0");
  const double disc = delta_e * delta_e - 0.25 * gamma1 * gamma1;
  double bracket;  // e^{-gamma1 t/2} (sin(nu t)/nu + gamma1 (1-cos(nu t))/(2 nu^2))
  if (disc > 0.0) {
    const double nu = std::sqrt(disc);
    const double half = sinc(0.5 * nu * t);  // (1-cos x)/x^2 = sinc(x/2)^2 / 2
    bracket = std::exp(-0.5 * gamma1 * t) *
              (t * sinc(nu * t) + 0.25 * gamma1 * t * t * half * half);
  } else if (disc < 0.0) {
    const double b = std::sqrt(-disc);  // b < gamma1/2, all exponents decay
    if (b * t < 350.0 && gamma1 * t < 600.0) {
      const double half = sinhc(0.5 * b * t);
      bracket = std::exp(-0.5 * gamma1 * t) *
                (t * sinhc(b * t) + 0.25 * gamma1 * t * t * half * half);
    } else {
      const double ep = std::exp((b - 0.5 * gamma1) * t);
      const double em = std::exp(-(b + 0.5 * gamma1) * t);
      bracket = (ep - em) / (2.0 * b) +
                gamma1 * (ep + em - 2.0 * std::exp(-0.5 * gamma1 * t)) / (4.0 * b * b);
    }
  } else {
    bracket = std::exp(-0.5 * gamma1 * t) * (t + 0.25 * gamma1 * t * t);
  }
  return 0.5 * delta_e * std::abs(bracket);
}

double damping_transition_gamma(const ModelParams& params, int n) {
  if (params.g1 <= 0.0)
    throw std::invalid_argument("damping_transition_gamma: g1 must be > 0");
  return 8.0 * params.eta * std::sqrt(double(n)) * params.delta * params.g2 / params.g1;
}

LZFit fit_lz(const TimeSeries& series, FitWindow window, FitOptions options) {
  if (series.size() < 8)
    throw std::invalid_argument("fit_lz: series too short");

  // initial guesses from the crest structure of the full trace: the first
  // local maximum within 2 percent of the global one locates the top of the
  // first crest even when small ripples or noise ride on the signal
  const std::vector<double>& y = series.negativity;
  const double y_max = *std::max_element(y.begin(), y.end());
  if (!(y_max > 0.0)) throw std::invalid_argument("fit_lz: series is identically zero");
  const auto peaks = local_maxima(series.t, y, 0.98 * y_max);
  if (peaks.empty() || y_max == y.back())
    throw std::invalid_argument(
        "fit_lz: window contains neither two extrema nor a rise and decay");
  const std::size_t i1 = peaks.front();
  const double t_peak = series.t[i1];
  if (!(t_peak > 0.0))
    throw std::invalid_argument("fit_lz: window lacks a usable rise");
  double delta_e0 = 0.5 * M_PI / t_peak;
  double gamma10 = 0.5 * delta_e0;
  bool have_second = false;

  // second crest: windowed argmax one expected period past the first one
  const double period0 = M_PI / delta_e0;
  std::size_t i2 = 0;
  double best2 = 0.0;
  for (std::size_t i = i1 + 1; i < series.size(); ++i) {
    const double dt = series.t[i] - t_peak;
    if (dt < 0.5 * period0) continue;
    if (dt > 1.5 * period0) break;
    if (y[i] > best2) {
      best2 = y[i];
      i2 = i;
    }
  }
  if (i2 > 0 && best2 > 0.05 * y_max) {
    have_second = true;
    delta_e0 = M_PI / (series.t[i2] - t_peak);  // crest spacing
    gamma10 = std::max(1e-6 * delta_e0,
                       2.0 * std::log(y[i1] / best2) / (series.t[i2] - t_peak));
  }

  double t_max = window.t_max;
  if (t_max < 0.0) t_max = 4.0 * M_PI / delta_e0;  // four periods of the guess
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series.t[i] >= window.t_min && series.t[i] <= t_max) {
      ts.push_back(series.t[i]);
      ys.push_back(series.negativity[i]);
    }
  if (ts.size() < 8) throw std::invalid_argument("fit_lz: window too narrow");

  auto residual_norm = [&](double de, double g1) {
    double s = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double r = negativity_lz_damped(ts[i], de, g1) - ys[i];
      s += r * r;
    }
    return std::sqrt(s);
  };

  // damped Gauss-Newton on (delta_e, gamma1), numeric Jacobian
  const std::size_t m = ts.size();
  std::vector<double> r(m), j0(m), j1(m);
  LZFit best;
  best.residual = std::numeric_limits<double>::infinity();

  std::vector<std::pair<double, double>> starts = {{delta_e0, 0.05 * delta_e0},
                                                   {delta_e0, 0.5 * delta_e0},
                                                   {delta_e0, 2.0 * delta_e0},
                                                   {0.5 * delta_e0, 0.25 * delta_e0},
                                                   {2.0 * delta_e0, delta_e0}};
  if (have_second) starts.insert(starts.begin(), {delta_e0, gamma10});
  for (const auto& start : starts) {
    double de = start.first, g1 = start.second;
    double lm = 1e-3;
    double rn = residual_norm(de, g1);
    int iter = 0;
    bool converged = false;
    for (; iter < options.max_iterations; ++iter) {
      const double hde = std::max(1e-10, 1e-6 * de);
      const double hg1 = std::max(1e-10, 1e-6 * std::max(g1, 1e-3 * de));
      for (std::size_t i = 0; i < m; ++i) {
        const double f = negativity_lz_damped(ts[i], de, g1);
        r[i] = f - ys[i];
        j0[i] = (negativity_lz_damped(ts[i], de + hde, g1) -
                 negativity_lz_damped(ts[i], std::max(de - hde, 1e-300), g1)) /
                (2.0 * hde);
        j1[i] = (negativity_lz_damped(ts[i], de, g1 + hg1) -
                 negativity_lz_damped(ts[i], de, std::max(g1 - hg1, 0.0))) /
                (g1 - hg1 >= 0.0 ? 2.0 * hg1 : hg1 + g1);
      }
      double a00 = 0, a01 = 0, a11 = 0, b0 = 0, b1 = 0;
      for (std::size_t i = 0; i < m; ++i) {
        a00 += j0[i] * j0[i];
        a01 += j0[i] * j1[i];
        a11 += j1[i] * j1[i];
        b0 -= j0[i] * r[i];
        b1 -= j1[i] * r[i];
      }
      bool stepped = false;
      for (int attempt = 0; attempt < 12; ++attempt) {
        const double d00 = a00 * (1.0 + lm), d11 = a11 * (1.0 + lm);
        const double det = d00 * d11 - a01 * a01;
        if (std::abs(det) < 1e-300) {
          lm *= 4.0;
          continue;
        }
        const double s0 = (b0 * d11 - b1 * a01) / det;
        const double s1 = (b1 * d00 - b0 * a01) / det;
        const double de_new = std::max(1e-9 * delta_e0, de + s0);
        const double g1_new = std::max(0.0, g1 + s1);
        const double rn_new = residual_norm(de_new, g1_new);
        if (rn_new <= rn) {
          const double rel = std::hypot(de_new - de, g1_new - g1) /
                             std::max(1e-300, std::hypot(de, g1));
          de = de_new;
          g1 = g1_new;
          rn = rn_new;
          lm = std::max(1e-12, lm * 0.3);
          stepped = true;
          if (rel < options.step_tol) converged = true;
          break;
        }
        lm *= 4.0;
      }
      if (converged || !stepped) {
        converged = converged || !stepped;  // stall on a flat minimum counts
        break;
      }
    }
    if (rn < best.residual) {
      best.delta_e = de;
      best.gamma1 = g1;
      best.residual = rn;
      best.iterations = iter;
      best.converged = converged;
      best.classification = classify(de, g1);
    }
  }

  if (!best.converged)
    throw fit_error("fit_lz: no convergence within " +
                        std::to_string(options.max_iterations) + " iterations",
                    best);
  return best;
}

}  // namespace eitsim
