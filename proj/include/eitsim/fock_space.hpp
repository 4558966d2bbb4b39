#pragma once

#include "eitsim/types.hpp"

namespace eitsim {

/// Truncated composite Hilbert space of a three-level atom in a harmonic
/// trap: dim_total = 3 * (n_max + 1).
///
/// Index convention (electronic-major): the composite basis index is
///   i = e * dim_vib + n
/// with electronic label e in {0,1,2} standing for the states |1>,|2>,|3>
/// and vibrational quantum number n in {0,...,n_max}. With this layout a
/// density matrix is a 3x3 grid of (n_max+1)-dimensional vibrational blocks.
struct TruncatedSpace {
  int n_max;

  explicit TruncatedSpace(int n_max_) : n_max(n_max_) {
    if (n_max < 1) throw std::invalid_argument("TruncatedSpace: n_max must be >= 1");
  }

  static constexpr int dim_el = 3;
  int dim_vib() const { return n_max + 1; }
  int dim_total() const { return dim_el * dim_vib(); }

  int index(int e, int n) const { return e * dim_vib() + n; }
};

/// Vibrational lowering operator a on the truncated ladder:
/// <n-1|a|n> = sqrt(n). Acts on the vibrational factor only.
complex_matrix annihilation_op(const TruncatedSpace& space);

/// exp(sign * i * eta * (a + a^dag)) on the truncated vibrational space,
/// built from the eigendecomposition of the Hermitian generator so that the
/// result is unitary to machine precision inside the retained subspace.
/// sign must be +1 or -1.
complex_matrix displacement_op(double eta, int sign, const TruncatedSpace& space);

/// Kronecker product el_op (3x3) x vib_op (dim_vib x dim_vib) in the
/// electronic-major index convention.
complex_matrix embed(const complex_matrix& el_op, const complex_matrix& vib_op,
                     const TruncatedSpace& space);

enum class Subsystem { electronic, vibrational };

/// Block-wise partial transpose of a composite-space operator with respect
/// to the chosen factor. Preserves trace and Hermiticity exactly.
complex_matrix partial_transpose(const complex_matrix& rho, Subsystem which,
                                 const TruncatedSpace& space);

}  // namespace eitsim
