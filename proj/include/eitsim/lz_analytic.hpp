#pragma once

#include "eitsim/observables.hpp"

namespace eitsim {

/// Negativity of an isolated avoided-crossing state pair without
/// spontaneous emission: (1/2)|sin(delta_e * t)|, period pi/delta_e.
double negativity_lz(double t, double delta_e);

/// Damped pair negativity
///   (delta_e/2) e^{-gamma1 t/2} |sin(nu t)/nu + gamma1 (1 - cos(nu t))/(2 nu^2)|
/// with nu = sqrt(delta_e^2 - gamma1^2/4). The overdamped branch
/// (gamma1/2 > delta_e) is the analytic continuation via hyperbolic
/// functions; the critical point uses the nu -> 0 limit. Continuous in
/// gamma1 everywhere.
double negativity_lz_damped(double t, double delta_e, double gamma1);

/// Spontaneous rate at which the pair dynamics crosses from underdamped to
/// overdamped: Gamma* = 8 eta sqrt(n) delta g2 / g1.
double damping_transition_gamma(const ModelParams& params, int n);

enum class DampingClass { underdamped, overdamped, critical };

struct LZFit {
  double delta_e = 0.0;   ///< fitted gap (rad/us)
  double gamma1 = 0.0;    ///< fitted width (rad/us)
  double residual = 0.0;  ///< Euclidean norm of the final residuals
  DampingClass classification = DampingClass::underdamped;
  int iterations = 0;
  bool converged = false;
};

/// Thrown by fit_lz on non-convergence; carries the best parameters found.
class fit_error : public std::runtime_error {
 public:
  fit_error(const std::string& msg, LZFit best)
      : std::runtime_error(msg), best(best) {}
  LZFit best;
};

struct FitWindow {
  double t_min = 0.0;
  double t_max = -1.0;  ///< < 0: four periods of the initial gap guess
};

struct FitOptions {
  int max_iterations = 200;
  double step_tol = 1e-8;  ///< convergence when the relative step is below this
};

/// Damped Gauss-Newton (Levenberg-Marquardt) least-squares fit of the
/// damped pair-negativity model to a sampled negativity trace. The initial
/// gap guess comes from the first-peak time, the width guess from the log
/// decrement of successive peaks. Requires at least two oscillation extrema
/// or a clear rise and decay inside the window.
LZFit fit_lz(const TimeSeries& series, FitWindow window = {}, FitOptions options = {});

}  // namespace eitsim
