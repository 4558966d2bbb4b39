#pragma once

#include <array>

#include "eitsim/fock_space.hpp"

namespace eitsim {

/// Physical parameters of the driven three-level trapped atom. All
/// frequencies are angular, in rad/us; time is in us throughout.
///
/// Figure captions and config files quote frequencies "in units of
/// 2*pi MHz"; use from_paper_units to ingest such values (multiplies
/// by 2*pi once).
struct ModelParams {
  double g1 = 0.0;     ///< strong-laser Rabi frequency (rad/us)
  double g2 = 0.0;     ///< weak-laser Rabi frequency (rad/us)
  double delta = 0.0;  ///< common blue detuning Delta > 0 (rad/us)
  double gamma = 0.0;  ///< spontaneous emission rate of |3> (rad/us)
  double omega = 0.0;  ///< trap frequency (rad/us)
  double eta = 0.0;    ///< Lamb-Dicke parameter (dimensionless)
  int n_max = 1;       ///< highest retained vibrational level

  TruncatedSpace space() const { return TruncatedSpace(n_max); }

  static ModelParams from_paper_units(double g1_2piMHz, double g2_2piMHz,
                                      double delta_2piMHz, double gamma_2piMHz,
                                      double omega_2piMHz, double eta, int n_max);

  /// Generalized Rabi frequency sqrt(g1^2 + g2^2 + delta^2).
  double rabi() const;

  /// Relative mismatch |(rabi - delta)/2 - omega| / omega of the
  /// two-photon resonance condition. The dressed-pair analysis assumes
  /// this is small; callers warn above 0.05.
  double resonance_mismatch() const;

  void validate() const;  ///< throws std::invalid_argument on bad values
};

/// Eigensystem of the electronic-plus-laser Hamiltonian at lambda = 1.
/// Energies are complex in the decaying (gamma > 0) variant; the
/// eigenvector phase convention makes the largest-magnitude component
/// real positive.
struct DressedBasis {
  std::array<complexd, 3> energy;
  std::array<Eigen::Vector3cd, 3> state;
  double rabi = 0.0;
};

/// Full Hamiltonian omega a^dag a + Delta(|1><1| + |2><2|) + interaction,
/// with both Rabi frequencies scaled by lambda and the sideband coupling
/// entering through exp(+-i eta (a + a^dag)). Hermitian by construction.
complex_matrix hamiltonian_total(const ModelParams& params, double lambda);

/// Closed-form dressed states: energies (Omega+Delta)/2, Delta,
/// -(Omega-Delta)/2 with Omega = sqrt(g1^2+g2^2+delta^2). For
/// g1 = g2 = 0 returns the bare basis (|1>,|2>,|3>) with energies
/// (Delta, Delta, 0).
DressedBasis dressed_states(double g1, double g2, double delta);

/// Dressed states of the decaying electronic Hamiltonian
/// H_el + H_int - i(gamma/2)|3><3|; complex energies, |phi_2> width-free.
DressedBasis effective_dressed_states(double g1, double g2, double delta,
                                      double gamma);

/// First-order (in eta) sideband coupling
/// (i eta/2)(a+a^dag) x [g1|3><1| - g1|1><3| - g2|3><2| + g2|2><3|],
/// with lambda-scaled Rabi frequencies. Hermitian.
complex_matrix first_order_interaction(const ModelParams& params, double lambda);

struct LzGap {
  double exact;          ///< from dense diagonalization at lambda = 1 (rad/us)
  double perturbative;   ///< 2|A| with A = -i eta sqrt(n) g1 g2 / (2 delta)
  double pair_overlap;   ///< smallest pair-subspace weight of the two states
  bool resonance_ok;     ///< two-photon resonance within 5 percent
};

/// Avoided-crossing gap of the near-degenerate pair (|phi_1,n-1>, |phi_2,n>).
/// The exact value identifies the two eigenvectors of the full Hamiltonian
/// with the largest weight in the pair subspace; a weight below 0.5 means
/// the two-state picture has broken down and an error is thrown.
LzGap lz_gap(const ModelParams& params, int n);

/// Non-Hermitian effective Hamiltonian H - i(gamma/2)|3><3| x I.
/// By default the eta = 0 interaction is used (the dressed-pair decay
/// model); set eta_interaction to keep the full sideband coupling.
complex_matrix effective_hamiltonian(const ModelParams& params, double lambda,
                                     bool eta_interaction = false);

/// Decay width of the dressed state |phi_1>:
/// gamma1 = (gamma/4)(g1^2+g2^2) / (delta^2 + (gamma/2)^2).
double dressed_width_gamma1(const ModelParams& params);

/// Small-gamma stationary negativity eta g1 g2 / (4 omega delta) of the
/// interacting ground state |phi_2,0> - (A/2 omega)|phi_1,1>.
double stationary_negativity(const ModelParams& params);

}  // namespace eitsim
