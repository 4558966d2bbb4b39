#include "eitsim/atom_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eitsim {

namespace {

// Largest-magnitude component made real positive.
Eigen::Vector3cd fix_phase(Eigen::Vector3cd v) {
  int imax = 0;
  double best = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v(i)) > best) {
      best = std::abs(v(i));
      imax = i;
    }
  }
  if (best > 0.0) v *= std::conj(v(imax)) / std::abs(v(imax));
  return v;
}

Eigen::Matrix3cd ketbra(int i, int j) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(i, j) = 1.0;
  return m;
}

}  // namespace

ModelParams ModelParams::from_paper_units(double g1_2piMHz, double g2_2piMHz,
                                          double delta_2piMHz, double gamma_2piMHz,
                                          double omega_2piMHz, double eta, int n_max) {
  ModelParams p;
  p.g1 = two_pi * g1_2piMHz;
  p.g2 = two_pi * g2_2piMHz;
  p.delta = two_pi * delta_2piMHz;
  p.gamma = two_pi * gamma_2piMHz;
  p.omega = two_pi * omega_2piMHz;
  p.eta = eta;
  p.n_max = n_max;
  p.validate();
  return p;
}

double ModelParams::rabi() const {
  return std::sqrt(g1 * g1 + g2 * g2 + delta * delta);
}

double ModelParams::resonance_mismatch() const {
  if (omega <= 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(0.5 * (rabi() - delta) - omega) / omega;
}

void ModelParams::validate() const {
  if (g1 < 0.0 || g2 < 0.0 || gamma < 0.0 || omega < 0.0)
    throw std::invalid_argument("ModelParams: rates and frequencies must be >= 0");
  if (delta <= 0.0)
    throw std::invalid_argument("ModelParams: detuning delta must be > 0");
  if (eta < 0.0) throw std::invalid_argument("ModelParams: eta must be >= 0");
  if (n_max < 1) throw std::invalid_argument("ModelParams: n_max must be >= 1");
}

complex_matrix hamiltonian_total(const ModelParams& params, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("hamiltonian_total: lambda must be >= 0");
  const TruncatedSpace space = params.space();
  const int nv = space.dim_vib();
  const complex_matrix a = annihilation_op(space);
  const complex_matrix ivib = complex_matrix::Identity(nv, nv);

  complex_matrix h = embed(Eigen::Matrix3cd::Identity(), params.omega * (a.adjoint() * a), space);
  h += params.delta * embed(ketbra(0, 0) + ketbra(1, 1), ivib, space);

  const complex_matrix dplus = displacement_op(params.eta, +1, space);
  const complex_matrix dminus = displacement_op(params.eta, -1, space);
  complex_matrix coupling =
      0.5 * lambda * params.g1 * embed(ketbra(2, 0), dplus, space) +
      0.5 * lambda * params.g2 * embed(ketbra(2, 1), dminus, space);
  h += coupling + coupling.adjoint();
  return h;
}

DressedBasis dressed_states(double g1, double g2, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("dressed_states: delta must be > 0");
  DressedBasis b;
  const double gg = g1 * g1 + g2 * g2;
  const double om = std::sqrt(gg + delta * delta);
  b.rabi = om;
  if (gg == 0.0) {
    // degenerate case: bare basis, ordered (|1>,|2>,|3>)
    b.energy = {delta, delta, 0.0};
    b.state[0] = Eigen::Vector3cd(1, 0, 0);
    b.state[1] = Eigen::Vector3cd(0, 1, 0);
    b.state[2] = Eigen::Vector3cd(0, 0, 1);
    return b;
  }
  b.energy = {0.5 * (om + delta), delta, -0.5 * (om - delta)};
  b.state[0] = fix_phase(Eigen::Vector3cd(g1, g2, om - delta) /
                         std::sqrt(2.0 * om * (om - delta)));
  b.state[1] = fix_phase(Eigen::Vector3cd(-g2, g1, 0.0) / std::sqrt(gg));
  b.state[2] = fix_phase(Eigen::Vector3cd(g1, g2, -(om + delta)) /
                         std::sqrt(2.0 * om * (om + delta)));
  return b;
}

DressedBasis effective_dressed_states(double g1, double g2, double delta,
                                      double gamma) {
  if (gamma == 0.0) return dressed_states(g1, g2, delta);
  if (delta <= 0.0)
    throw std::invalid_argument("effective_dressed_states: delta must be > 0");
  DressedBasis b;
  const double gg = g1 * g1 + g2 * g2;
  b.rabi = std::sqrt(gg + delta * delta);
  const complexd half_width(0.0, 0.5 * gamma);
  const complexd root = std::sqrt((delta + half_width) * (delta + half_width) + gg);
  const complexd e1 = 0.5 * (delta - half_width) + 0.5 * root;
  const complexd e3 = 0.5 * (delta - half_width) - 0.5 * root;
  b.energy = {e1, delta, e3};
  if (gg == 0.0) {
    b.state[0] = Eigen::Vector3cd(1, 0, 0);
    b.state[1] = Eigen::Vector3cd(0, 1, 0);
    b.state[2] = Eigen::Vector3cd(0, 0, 1);
    return b;
  }
  auto make = [&](complexd e) {
    Eigen::Vector3cd v(g1, g2, 2.0 * (e - delta));
    return fix_phase(v / v.norm());
  };
  b.state[0] = make(e1);
  b.state[1] = fix_phase(Eigen::Vector3cd(-g2, g1, 0.0) / std::sqrt(gg));
  b.state[2] = make(e3);
  return b;
}

complex_matrix first_order_interaction(const ModelParams& params, double lambda) {
  const TruncatedSpace space = params.space();
  const complex_matrix a = annihilation_op(space);
  const complex_matrix x = a + a.adjoint();
  const double s1 = lambda * params.g1;
  const double s2 = lambda * params.g2;
  Eigen::Matrix3cd bracket = s1 * ketbra(2, 0) - s1 * ketbra(0, 2) -
                             s2 * ketbra(2, 1) + s2 * ketbra(1, 2);
  return embed(complexd(0.0, 0.5 * params.eta) * bracket, x, space);
}

LzGap lz_gap(const ModelParams& params, int n) {
  params.validate();
  if (n < 1 || n > params.n_max - 1)
    throw std::invalid_argument("lz_gap: require 1 <= n <= n_max - 1");

  LzGap out{};
  out.perturbative =
      params.eta * std::sqrt(double(n)) * params.g1 * params.g2 / params.delta;
  out.resonance_ok = params.resonance_mismatch() <= 0.05;

  const TruncatedSpace space = params.space();
  const int nv = space.dim_vib();
  const DressedBasis basis = dressed_states(params.g1, params.g2, params.delta);

  complex_vector pair_a = complex_vector::Zero(space.dim_total());
  complex_vector pair_b = complex_vector::Zero(space.dim_total());
  for (int e = 0; e < 3; ++e) {
    pair_a(e * nv + (n - 1)) = basis.state[0](e);  // |phi_1, n-1>
    pair_b(e * nv + n) = basis.state[1](e);        // |phi_2, n>
  }

  Eigen::SelfAdjointEigenSolver<complex_matrix> es(hamiltonian_total(params, 1.0));
  const complex_matrix& vecs = es.eigenvectors();
  Eigen::VectorXd weight =
      (vecs.adjoint() * pair_a).cwiseAbs2() + (vecs.adjoint() * pair_b).cwiseAbs2();

  int best = 0, second = 1;
  if (weight(1) > weight(0)) std::swap(best, second);
  for (int k = 2; k < weight.size(); ++k) {
    if (weight(k) > weight(best)) {
      second = best;
      best = k;
    } else if (weight(k) > weight(second)) {
      second = k;
    }
  }
  out.pair_overlap = std::min(weight(best), weight(second));
  if (out.pair_overlap < 0.5)
    throw std::runtime_error(
        "lz_gap: pair identification ambiguous (subspace weight " +
        std::to_string(out.pair_overlap) +
        " < 0.5); two-state picture has broken down");
  out.exact = std::abs(es.eigenvalues()(best) - es.eigenvalues()(second));
  return out;
}

complex_matrix effective_hamiltonian(const ModelParams& params, double lambda,
                                     bool eta_interaction) {
  ModelParams p = params;
  if (!eta_interaction) p.eta = 0.0;
  complex_matrix h = hamiltonian_total(p, lambda);
  const TruncatedSpace space = params.space();
  const complex_matrix ivib =
      complex_matrix::Identity(space.dim_vib(), space.dim_vib());
  h += complexd(0.0, -0.5 * params.gamma) * embed(ketbra(2, 2), ivib, space);
  return h;
}

double dressed_width_gamma1(const ModelParams& params) {
  if (params.delta <= 0.0)
    throw std::invalid_argument("dressed_width_gamma1: delta must be > 0");
  const double gg = params.g1 * params.g1 + params.g2 * params.g2;
  const double hw = 0.5 * params.gamma;
  return 0.25 * params.gamma * gg / (params.delta * params.delta + hw * hw);
}

double stationary_negativity(const ModelParams& params) {
  if (params.omega <= 0.0 || params.delta <= 0.0)
    throw std::invalid_argument("stationary_negativity: require omega, delta > 0");
  return params.eta * params.g1 * params.g2 / (4.0 * params.omega * params.delta);
}

}  // namespace eitsim
