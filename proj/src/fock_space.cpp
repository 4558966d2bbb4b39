#include "eitsim/fock_space.hpp"

#include <cmath>

namespace eitsim {

complex_matrix annihilation_op(const TruncatedSpace& space) {
  const int nv = space.dim_vib();
  complex_matrix a = complex_matrix::Zero(nv, nv);
  for (int n = 1; n < nv; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

complex_matrix displacement_op(double eta, int sign, const TruncatedSpace& space) {
  if (eta < 0.0) throw std::invalid_argument("displacement_op: eta must be >= 0");
  if (sign != 1 && sign != -1) throw std::invalid_argument("displacement_op: sign must be +-1");
  const complex_matrix a = annihilation_op(space);
  const complex_matrix x = a + a.adjoint();
  Eigen::SelfAdjointEigenSolver<complex_matrix> es(x);
  const Eigen::VectorXd& w = es.eigenvalues();
  complex_vector phase(w.size());
  for (int k = 0; k < w.size(); ++k)
    phase(k) = std::exp(complexd(0.0, sign * eta * w(k)));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

complex_matrix embed(const complex_matrix& el_op, const complex_matrix& vib_op,
                     const TruncatedSpace& space) {
  const int nv = space.dim_vib();
  if (el_op.rows() != 3 || el_op.cols() != 3)
    throw std::invalid_argument("embed: electronic operator must be 3x3");
  if (vib_op.rows() != nv || vib_op.cols() != nv)
    throw std::invalid_argument("embed: vibrational operator dimension mismatch");
  complex_matrix out(space.dim_total(), space.dim_total());
  for (int e = 0; e < 3; ++e)
    for (int f = 0; f < 3; ++f)
      out.block(e * nv, f * nv, nv, nv) = el_op(e, f) * vib_op;
  return out;
}

complex_matrix partial_transpose(const complex_matrix& rho, Subsystem which,
                                 const TruncatedSpace& space) {
  const int nv = space.dim_vib();
  const int d = space.dim_total();
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  complex_matrix out(d, d);
  if (which == Subsystem::electronic) {
    // swap the electronic block indices
    for (int e = 0; e < 3; ++e)
      for (int f = 0; f < 3; ++f)
        out.block(e * nv, f * nv, nv, nv) = rho.block(f * nv, e * nv, nv, nv);
  } else {
    // transpose within each electronic block
    for (int e = 0; e < 3; ++e)
      for (int f = 0; f < 3; ++f)
        out.block(e * nv, f * nv, nv, nv) =
            rho.block(e * nv, f * nv, nv, nv).transpose();
  }
  return out;
}

}  // namespace eitsim
