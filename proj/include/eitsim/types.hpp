#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace eitsim {

// All operators on the composite space are dense complex matrices.
using complex_matrix = Eigen::MatrixXcd;
using complex_vector = Eigen::VectorXcd;
using complexd = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Thrown when the retained Fock ladder is too short for the run.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& msg, int suggested_n_max)
      : std::runtime_error(msg), suggested_n_max(suggested_n_max) {}
  int suggested_n_max;
};

// Thrown when an integration tolerance is breached (trace drift,
// hermiticity loss, failure to reach a requested stationary state).
class tolerance_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace eitsim
