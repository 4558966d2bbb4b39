#pragma once

#include <string>
#include <vector>

#include "eitsim/atom_model.hpp"

namespace eitsim {

/// Sampled observables of one simulation run. All columns share the time
/// grid t (us, strictly increasing).
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> negativity;
  std::vector<double> mean_n;
  std::vector<double> emission_rate;  ///< photons/us
  std::vector<double> photon_count;   ///< cumulative, non-decreasing
  std::vector<double> fidelity;
  std::vector<double> trace_drift;
  std::vector<double> min_eig;
  std::vector<double> tail_pop;

  std::size_t size() const { return t.size(); }
};

/// Negativity (||rho^T||_1 - 1)/2, computed as the summed magnitude of the
/// negative eigenvalues of the Hermitian partial transpose (taken over the
/// electronic factor). Throws std::invalid_argument if rho is not Hermitian
/// within 1e-8.
double negativity(const complex_matrix& rho, const TruncatedSpace& space);

/// Mean vibrational quantum number sum_{e,n} n rho_{(e,n),(e,n)}.
double mean_n(const complex_matrix& rho, const TruncatedSpace& space);

/// Spontaneous photon emission rate R = gamma * sum_n rho_{(3,n),(3,n)}.
double emission_rate(const complex_matrix& rho, const ModelParams& params);

/// Population of |phi_2, 0>, the dark state tensor the trap ground state.
double fidelity_dark(const complex_matrix& rho, const ModelParams& params);

struct PhotonCount {
  std::vector<double> count;            ///< trapezoidal integral of the rate
  std::vector<double> crossing_times;   ///< times where count passes 1,2,3,...
};

/// Accumulated photon number from the sampled emission rate; integer
/// crossing times by linear interpolation between samples.
PhotonCount photon_count(const TimeSeries& series);

/// Writes |rho_ij| as a labeled CSV grid ordered vibrational-major, so each
/// vibrational block is a contiguous 3x3 electronic sub-block. Row/column
/// labels are "e{1|2|3}:n{k}".
void heatmap_export(const complex_matrix& rho, const TruncatedSpace& space,
                    const std::string& path);

}  // namespace eitsim
