#pragma once

#include <random>

#include "eitsim/types.hpp"

namespace test_util {

using eitsim::complex_matrix;
using eitsim::complex_vector;
using eitsim::complexd;

inline complex_matrix random_matrix(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  complex_matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = complexd(dist(rng), dist(rng));
  return m;
}

inline complex_matrix random_hermitian(int n, std::mt19937& rng) {
  const complex_matrix a = random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline complex_matrix random_density(int n, std::mt19937& rng) {
  const complex_matrix a = random_matrix(n, n, rng);
  complex_matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return rho;
}

inline complex_vector random_ket(int n, std::mt19937& rng) {
  complex_vector v(n);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < n; ++i) v(i) = complexd(dist(rng), dist(rng));
  v.normalize();
  return v;
}

inline complex_matrix random_unitary(int n, std::mt19937& rng) {
  const complex_matrix a = random_matrix(n, n, rng);
  Eigen::HouseholderQR<complex_matrix> qr(a);
  complex_matrix q = qr.householderQ();
  const complex_matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
  return q;
}

}  // namespace test_util
