#pragma once

#include <functional>
#include <vector>

#include "eitsim/observables.hpp"

namespace eitsim {

/// State of the composite system at time t (us). Valid states are
/// Hermitian, unit trace, positive semidefinite within tolerance; the
/// integrator monitors all three.
struct DensityMatrix {
  complex_matrix rho;
  double t = 0.0;
};

/// Piecewise laser amplitude scale lambda(t): 1 until t_off, a smooth
/// sin^2 ramp of duration delta_t, 0 afterwards. Continuous and monotone
/// non-increasing.
struct Schedule {
  enum class Mode { constant, ramp };
  Mode mode = Mode::constant;
  double t_off = 0.0;    ///< switch-off start (us)
  double delta_t = 0.0;  ///< ramp duration (us)

  double lambda(double t) const;
  void validate() const;
};

/// Fixed-step integration settings. dt is the RK4 step and obeys the
/// stability heuristic dt * max(delta, gamma, Omega) <= 0.3; with the
/// precomputed-propagator method the engine advances by one sampling
/// interval (dt * sample_every) per application of exp(L * interval),
/// which is exact for any interval on constant-lambda stretches.
struct IntegratorConfig {
  enum class Method { rk4, precomputed_propagator };

  double dt = 0.0;       ///< 0 = auto: 0.25 / max(delta, gamma, Omega)
  int sample_every = 0;  ///< 0 = auto: samples roughly every 0.5 us
  Method method = Method::precomputed_propagator;

  /// Continue past t_end, doubling the propagator stride, until
  /// ||rhs||_F < stationary_rhs_tol (requires the propagator method and a
  /// constant-lambda tail). Throws tolerance_error if t_cap is reached.
  bool to_stationary = false;
  double stationary_rhs_tol = 1e-9;
  double t_cap = 2.0e5;

  double resolved_dt(const ModelParams& params) const;
  int resolved_sample_every(const ModelParams& params) const;
  void validate(const ModelParams& params) const;
};

/// Lindblad dissipator of spontaneous emission from |3> into |1>, |2>
/// with photon recoil along +- the trap axis: four channels
/// sigma_{j,q} = |j><3| x exp(q i eta (a + a^dag)), each at rate gamma/4.
/// Output is traceless and Hermiticity-preserving.
complex_matrix dissipator(const complex_matrix& rho, const ModelParams& params);

/// Master-equation right-hand side -i[H(lambda(t)), rho] + L rho.
complex_matrix rhs(const complex_matrix& rho, double t, const ModelParams& params,
                   const Schedule& schedule);

/// Pure initial state |phi_2, n_in><phi_2, n_in| at t = 0.
DensityMatrix initial_state(const ModelParams& params, int n_in);

/// Vectorized generator L_total acting on column-stacked vec(rho):
/// vec(rhs) = L_total * vec(rho) at fixed lambda. The Hamiltonian enters
/// with the constant delta shift removed (identical dynamics).
complex_matrix liouvillian_matrix(const ModelParams& params, double lambda);

/// exp(A) by scaling-and-squaring with a Taylor core; the input is scaled
/// until its infinity norm is below 0.5.
complex_matrix matrix_exponential(const complex_matrix& a);

/// Called at every accepted sample with (t, rho).
using SampleObserver = std::function<void(double, const complex_matrix&)>;

/// Fixed-step integration of the master equation over [rho0.t, t_end].
/// Constant-lambda stretches use the configured method (gamma = 0 stretches
/// propagate by the exact eigenbasis unitary); ramp stretches always use
/// RK4. Sampled observables and diagnostics are returned per sample; the
/// run aborts with truncation_error when the population of the top three
/// vibrational levels exceeds 1e-4 and with tolerance_error when the trace
/// drifts beyond 1e-6 or Hermiticity degrades beyond 1e-8.
TimeSeries integrate(const DensityMatrix& rho0, double t_end,
                     const ModelParams& params, const Schedule& schedule,
                     const IntegratorConfig& config,
                     const std::vector<SampleObserver>& observers = {});

}  // namespace eitsim
