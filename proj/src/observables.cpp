#include "eitsim/observables.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace eitsim {

double negativity(const complex_matrix& rho, const TruncatedSpace& space) {
  if (rho.rows() != space.dim_total() || rho.cols() != space.dim_total())
    throw std::invalid_argument("negativity: dimension mismatch");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-8)
    throw std::invalid_argument("negativity: input not Hermitian (deviation " +
                                std::to_string(herm) + ")");
  complex_matrix pt = partial_transpose(rho, Subsystem::electronic, space);
  pt = 0.5 * (pt + pt.adjoint());
  Eigen::SelfAdjointEigenSolver<complex_matrix> es(pt, Eigen::EigenvaluesOnly);
  double neg = 0.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) < 0.0) neg -= es.eigenvalues()(k);
  return neg;
}

double mean_n(const complex_matrix& rho, const TruncatedSpace& space) {
  const int nv = space.dim_vib();
  double sum = 0.0;
  for (int e = 0; e < 3; ++e)
    for (int n = 0; n < nv; ++n) sum += n * rho(e * nv + n, e * nv + n).real();
  return sum;
}

double emission_rate(const complex_matrix& rho, const ModelParams& params) {
  const TruncatedSpace space = params.space();
  const int nv = space.dim_vib();
  double pop3 = 0.0;
  for (int n = 0; n < nv; ++n) pop3 += rho(2 * nv + n, 2 * nv + n).real();
  return params.gamma * pop3;
}

double fidelity_dark(const complex_matrix& rho, const ModelParams& params) {
  const TruncatedSpace space = params.space();
  const DressedBasis basis = dressed_states(params.g1, params.g2, params.delta);
  complex_vector dark = complex_vector::Zero(space.dim_total());
  for (int e = 0; e < 3; ++e) dark(e * space.dim_vib()) = basis.state[1](e);
  return (dark.adjoint() * rho * dark)(0, 0).real();
}

PhotonCount photon_count(const TimeSeries& series) {
  PhotonCount out;
  const std::size_t m = series.size();
  out.count.resize(m, 0.0);
  double acc = 0.0;
  int next_integer = 1;
  for (std::size_t i = 1; i < m; ++i) {
    const double dt = series.t[i] - series.t[i - 1];
    const double before = acc;
    acc += 0.5 * (series.emission_rate[i] + series.emission_rate[i - 1]) * dt;
    out.count[i] = acc;
    while (acc >= next_integer) {
      const double frac = (next_integer - before) / (acc - before);
      out.crossing_times.push_back(series.t[i - 1] + frac * dt);
      ++next_integer;
    }
  }
  return out;
}

void heatmap_export(const complex_matrix& rho, const TruncatedSpace& space,
                    const std::string& path) {
  const int nv = space.dim_vib();
  const int d = space.dim_total();
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("heatmap_export: dimension mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("heatmap_export: cannot open " + path);
  out << "# |rho_ij| magnitudes; labels e{electronic 1..3}:n{vibrational},"
         " vibrational-major ordering\n";
  auto label = [&](int row) {
    const int n = row / 3, e = row % 3;
    return "e" + std::to_string(e + 1) + ":n" + std::to_string(n);
  };
  // grid index r = n*3 + e maps to composite index e*nv + n
  auto composite = [&](int row) { return (row % 3) * nv + row / 3; };
  out << "index";
  for (int c = 0; c < d; ++c) out << "," << label(c);
  out << "\n";
  char buf[32];
  for (int r = 0; r < d; ++r) {
    out << label(r);
    for (int c = 0; c < d; ++c) {
      std::snprintf(buf, sizeof buf, "%.12e", std::abs(rho(composite(r), composite(c))));
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace eitsim
