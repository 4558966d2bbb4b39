#include <doctest.h>

#include "eitsim/fock_space.hpp"
#include "test_helpers.hpp"

using namespace eitsim;
using test_util::random_hermitian;
using test_util::random_matrix;

TEST_CASE("truncated space layout and bounds") {
  TruncatedSpace space(5);
  CHECK(space.dim_vib() == 6);
  CHECK(space.dim_total() == 18);
  CHECK(space.index(0, 0) == 0);
  CHECK(space.index(2, 5) == 17);
  CHECK(space.index(1, 3) == 9);
  CHECK_THROWS_AS(TruncatedSpace(0), std::invalid_argument);
}

TEST_CASE("annihilation operator matrix elements") {
  TruncatedSpace space(2);
  const complex_matrix a = annihilation_op(space);
  CHECK(a(0, 1).real() == doctest::Approx(std::sqrt(1.0)).epsilon(1e-15));
  CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  int nonzero = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(a(i, j)) > 0.0) {
        ++nonzero;
        CHECK(a(i, j).imag() == 0.0);
        CHECK(a(i, j).real() > 0.0);
      }
  CHECK(nonzero == 2);

  // a annihilates the vibrational ground state
  complex_vector e0 = complex_vector::Zero(3);
  e0(0) = 1.0;
  CHECK((a * e0).norm() == 0.0);
}

TEST_CASE("annihilation operator has n_max positive entries") {
  TruncatedSpace space(7);
  const complex_matrix a = annihilation_op(space);
  int nonzero = 0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > 0.0) ++nonzero;
  CHECK(nonzero == space.n_max);
}

TEST_CASE("commutator [a, a^dag] shows the truncation artifact") {
  TruncatedSpace space(6);
  const complex_matrix a = annihilation_op(space);
  const complex_matrix comm = a * a.adjoint() - a.adjoint() * a;
  for (int n = 0; n <= space.n_max; ++n) {
    const double expected = (n == space.n_max) ? -double(space.n_max) : 1.0;
    CHECK(comm(n, n).real() == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK((comm - complex_matrix(comm.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("displacement operator at eta = 0 is the identity") {
  TruncatedSpace space(9);
  for (int sign : {+1, -1}) {
    const complex_matrix d = displacement_op(0.0, sign, space);
    CHECK((d - complex_matrix::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("displacement operator unitarity away from the truncation boundary") {
  TruncatedSpace space(30);
  const complex_matrix d = displacement_op(0.1, +1, space);
  const int m = space.n_max - 5 + 1;  // rows/columns n <= n_max - 5
  const complex_matrix defect =
      (d.adjoint() * d - complex_matrix::Identity(31, 31)).block(0, 0, m, m);
  CHECK(defect.cwiseAbs().maxCoeff() < 1e-8);

  const complex_matrix round_trip =
      (displacement_op(0.1, +1, space) * displacement_op(0.1, -1, space) -
       complex_matrix::Identity(31, 31))
          .block(0, 0, m, m);
  CHECK(round_trip.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("displacement vacuum matrix element against the power series") {
  const double eta = 0.1;
  TruncatedSpace space(20);
  const complex_matrix d = displacement_op(eta, +1, space);

  // <0|exp(i eta (a+a^dag))|0> = sum_m (-eta^2)^m (2m-1)!! / (2m)!   (odd
  // vacuum moments vanish, <0|(a+a^dag)^{2m}|0> = (2m-1)!!)
  double series = 0.0;
  double double_factorial = 1.0;  // (2m-1)!! with (-1)!! = 1
  double factorial = 1.0;         // (2m)!
  for (int m = 0; m <= 30; ++m) {
    if (m > 0) {
      double_factorial *= 2 * m - 1;
      factorial *= (2 * m - 1) * (2 * m);
    }
    series += std::pow(-eta * eta, m) * double_factorial / factorial;
  }
  CHECK(std::abs(d(0, 0) - complexd(series, 0.0)) < 1e-10);
  CHECK(std::abs(d(0, 0) - complexd(std::exp(-0.5 * eta * eta), 0.0)) < 1e-10);
}

TEST_CASE("embed basics and bilinearity") {
  TruncatedSpace space(4);
  const int nv = space.dim_vib();
  const complex_matrix i3 = complex_matrix::Identity(3, 3);
  const complex_matrix iv = complex_matrix::Identity(nv, nv);
  CHECK((embed(i3, iv, space) -
         complex_matrix::Identity(space.dim_total(), space.dim_total()))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  complex_matrix p33 = complex_matrix::Zero(3, 3);
  p33(2, 2) = 1.0;
  const complex_matrix proj = embed(p33, iv, space);
  for (int n = 0; n < nv; ++n) {
    complex_vector basis = complex_vector::Zero(space.dim_total());
    basis(space.index(2, n)) = 1.0;
    CHECK((proj * basis - basis).norm() == 0.0);
    basis.setZero();
    basis(space.index(0, n)) = 1.0;
    CHECK((proj * basis).norm() == 0.0);
  }

  std::mt19937 rng(7);
  const complex_matrix a = random_matrix(3, 3, rng);
  const complex_matrix b = random_matrix(nv, nv, rng);
  const complexd alpha(0.7, -1.3);
  CHECK((embed(alpha * a, b, space) - alpha * embed(a, b, space)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(std::abs(embed(a, b, space).trace() - a.trace() * b.trace()) < 1e-12);
  CHECK_THROWS_AS(embed(a, random_matrix(nv + 1, nv + 1, rng), space),
                  std::invalid_argument);
}

TEST_CASE("partial transpose of a product state") {
  TruncatedSpace space(3);
  std::mt19937 rng(11);
  const complex_matrix sig_el = test_util::random_density(3, rng);
  const complex_matrix sig_vib = test_util::random_density(space.dim_vib(), rng);
  const complex_matrix rho = embed(sig_el, sig_vib, space);

  const complex_matrix pt = partial_transpose(rho, Subsystem::electronic, space);
  CHECK((pt - embed(sig_el.transpose(), sig_vib, space)).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::SelfAdjointEigenSolver<complex_matrix> es(pt);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);  // separable: PT stays PSD
}

TEST_CASE("partial transpose involution, trace and hermiticity") {
  TruncatedSpace space(4);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const complex_matrix rho = random_hermitian(space.dim_total(), rng);
    for (auto side : {Subsystem::electronic, Subsystem::vibrational}) {
      const complex_matrix pt = partial_transpose(rho, side, space);
      CHECK((partial_transpose(pt, side, space) - rho).cwiseAbs().maxCoeff() == 0.0);
      CHECK(std::abs(pt.trace() - rho.trace()) < 1e-14);
      CHECK((pt - pt.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
}

TEST_CASE("trace norm of the partial transpose matches on both subsystems") {
  TruncatedSpace space(4);
  std::mt19937 rng(37);
  auto trace_norm = [](const complex_matrix& m) {
    Eigen::SelfAdjointEigenSolver<complex_matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  };
  for (int trial = 0; trial < 10; ++trial) {
    const complex_matrix rho = random_hermitian(space.dim_total(), rng);
    const double n_el = trace_norm(partial_transpose(rho, Subsystem::electronic, space));
    const double n_vib =
        trace_norm(partial_transpose(rho, Subsystem::vibrational, space));
    CHECK(std::abs(n_el - n_vib) < 1e-10);
  }
  CHECK_THROWS_AS(
      partial_transpose(complex_matrix::Zero(4, 4), Subsystem::electronic, space),
      std::invalid_argument);
}
