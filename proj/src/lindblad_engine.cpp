#include "eitsim/lindblad_engine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace eitsim {

namespace {

Eigen::Matrix3cd ketbra3(int i, int j) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(i, j) = 1.0;
  return m;
}

double inf_norm(const complex_matrix& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Cached operators for one parameter set.
struct Workspace {
  explicit Workspace(const ModelParams& p)
      : params(p), space(p.space()), nv(space.dim_vib()), d(space.dim_total()) {
    const complex_matrix a = annihilation_op(space);
    const complex_matrix ivib = complex_matrix::Identity(nv, nv);
    // delta shift removed: Delta(P11+P22) -> -Delta P33 (+ Delta I dropped)
    h0s = embed(Eigen::Matrix3cd::Identity(), p.omega * (a.adjoint() * a), space) -
          p.delta * embed(ketbra3(2, 2), ivib, space);
    dp = displacement_op(p.eta, +1, space);
    dm = displacement_op(p.eta, -1, space);
    complex_matrix coupling = 0.5 * p.g1 * embed(ketbra3(2, 0), dp, space) +
                              0.5 * p.g2 * embed(ketbra3(2, 1), dm, space);
    v = coupling + coupling.adjoint();
  }

  void add_dissipator(const complex_matrix& rho, complex_matrix& out) const {
    const double g = params.gamma;
    if (g == 0.0) return;
    const auto rho33 = rho.block(2 * nv, 2 * nv, nv, nv);
    gain.noalias() = dp * rho33 * dp.adjoint();
    gain.noalias() += dm * rho33 * dm.adjoint();
    gain *= 0.25 * g;
    out.block(0, 0, nv, nv) += gain;
    out.block(nv, nv, nv, nv) += gain;
    for (int e = 0; e < 3; ++e) {
      out.block(2 * nv, e * nv, nv, nv) -= 0.5 * g * rho.block(2 * nv, e * nv, nv, nv);
      out.block(e * nv, 2 * nv, nv, nv) -= 0.5 * g * rho.block(e * nv, 2 * nv, nv, nv);
    }
  }

  void rhs_into(const complex_matrix& rho, double lambda, complex_matrix& out) const {
    hwork = h0s;
    if (lambda != 0.0) hwork += lambda * v;
    comm.noalias() = hwork * rho;
    comm.noalias() -= rho * hwork;
    out = complexd(0.0, -1.0) * comm;
    add_dissipator(rho, out);
  }

  ModelParams params;
  TruncatedSpace space;
  int nv, d;
  complex_matrix h0s, v, dp, dm;
  mutable complex_matrix hwork, comm, gain;
};

struct Segment {
  double t0, t1;
  bool ramp;
  double lambda;  // for constant segments
};

std::vector<Segment> plan_segments(const Schedule& s, double t0, double t1) {
  std::vector<Segment> segs;
  if (s.mode == Schedule::Mode::constant) {
    segs.push_back({t0, t1, false, 1.0});
    return segs;
  }
  const double a = std::clamp(s.t_off, t0, t1);
  const double b = std::clamp(s.t_off + s.delta_t, t0, t1);
  if (a > t0) segs.push_back({t0, a, false, s.lambda(t0)});
  if (b > a) segs.push_back({a, b, true, 0.0});
  if (t1 > b) segs.push_back({b, t1, false, s.lambda(t1)});
  return segs;
}

// Per-sample bookkeeping and safety monitors.
class Recorder {
 public:
  Recorder(const Workspace& ws, const std::vector<SampleObserver>& observers)
      : ws_(ws), observers_(observers) {}

  void sample(double t, const complex_matrix& rho) {
    const double trace_drift = std::abs(rho.trace().real() - 1.0);
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (trace_drift > 1e-6)
      throw tolerance_error("integrate: trace drift " + std::to_string(trace_drift) +
                            " at t = " + std::to_string(t) +
                            " exceeds 1e-6; dt too large");
    if (herm > 1e-8)
      throw tolerance_error("integrate: hermiticity deviation " + std::to_string(herm) +
                            " at t = " + std::to_string(t) + " exceeds 1e-8");

    double tail = 0.0;
    const int nv = ws_.nv;
    for (int e = 0; e < 3; ++e)
      for (int n = std::max(0, nv - 3); n < nv; ++n)
        tail += rho(e * nv + n, e * nv + n).real();
    if (tail > 1e-4) {
      std::ostringstream msg;
      msg << "integrate: population " << tail << " in the top three vibrational "
          << "levels at t = " << t << " exceeds 1e-4; rerun with n_max >= "
          << ws_.params.n_max + 6;
      throw truncation_error(msg.str(), ws_.params.n_max + 6);
    }

    herm_work_ = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<complex_matrix> es(herm_work_, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();

    ts_.t.push_back(t);
    ts_.negativity.push_back(negativity(herm_work_, ws_.space));
    ts_.mean_n.push_back(mean_n(rho, ws_.space));
    ts_.emission_rate.push_back(emission_rate(rho, ws_.params));
    ts_.fidelity.push_back(fidelity_dark(rho, ws_.params));
    ts_.trace_drift.push_back(trace_drift);
    ts_.min_eig.push_back(min_eig);
    ts_.tail_pop.push_back(tail);
    for (const auto& obs : observers_) obs(t, rho);
  }

  TimeSeries take() {
    const PhotonCount pc = photon_count(ts_);
    ts_.photon_count = pc.count;
    return std::move(ts_);
  }

 private:
  const Workspace& ws_;
  const std::vector<SampleObserver>& observers_;
  TimeSeries ts_;
  complex_matrix herm_work_;
};

void rk4_segment(const Workspace& ws, const Schedule& schedule, const Segment& seg,
                 double dt, int sample_every, complex_matrix& rho, Recorder& rec) {
  const long n_steps = std::max(1L, std::lround(std::ceil((seg.t1 - seg.t0) / dt)));
  const double h = (seg.t1 - seg.t0) / double(n_steps);
  complex_matrix k1, k2, k3, k4, tmp;
  auto lam = [&](double t) { return seg.ramp ? schedule.lambda(t) : seg.lambda; };
  double t = seg.t0;
  for (long step = 1; step <= n_steps; ++step) {
    ws.rhs_into(rho, lam(t), k1);
    tmp = rho + (0.5 * h) * k1;
    ws.rhs_into(tmp, lam(t + 0.5 * h), k2);
    tmp = rho + (0.5 * h) * k2;
    ws.rhs_into(tmp, lam(t + 0.5 * h), k3);
    tmp = rho + h * k3;
    ws.rhs_into(tmp, lam(t + h), k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = seg.t0 + step * h;
    if (step % sample_every == 0 || step == n_steps) rec.sample(t, rho);
  }
}

// One-step propagator for a constant-lambda stretch. gamma = 0 keeps the
// dynamics unitary, so the matrix-dimension eigenbasis propagator is used
// instead of the vectorized exponential.
class ConstantPropagator {
 public:
  ConstantPropagator(const Workspace& ws, const ModelParams& params, double lambda,
                     double step)
      : unitary_(params.gamma == 0.0), step_(step) {
    if (unitary_) {
      const complex_matrix hs = ws.h0s + lambda * ws.v;
      Eigen::SelfAdjointEigenSolver<complex_matrix> es(hs);
      evals_ = es.eigenvalues();
      evecs_ = es.eigenvectors();
      build_unitary();
    } else {
      prop_ = matrix_exponential(step * liouvillian_matrix(params, lambda));
    }
  }

  void apply(complex_matrix& rho) {
    if (unitary_) {
      tmp_.noalias() = u_ * rho;
      rho.noalias() = tmp_ * u_.adjoint();
    } else {
      const int dd = rho.size();
      Eigen::Map<complex_vector> v(rho.data(), dd);
      vtmp_.noalias() = prop_ * v;
      v = vtmp_;
    }
  }

  void double_step() {
    step_ *= 2.0;
    if (unitary_) {
      build_unitary();
    } else {
      tmp_.noalias() = prop_ * prop_;
      prop_.swap(tmp_);
    }
  }

  double step() const { return step_; }

 private:
  void build_unitary() {
    complex_vector phase(evals_.size());
    for (int k = 0; k < evals_.size(); ++k)
      phase(k) = std::exp(complexd(0.0, -evals_(k) * step_));
    u_ = evecs_ * phase.asDiagonal() * evecs_.adjoint();
  }

  bool unitary_;
  double step_;
  complex_matrix u_, prop_, tmp_;
  Eigen::VectorXd evals_;
  complex_matrix evecs_;
  complex_vector vtmp_;
};

}  // namespace

double Schedule::lambda(double t) const {
  if (mode == Mode::constant || t < t_off) return 1.0;
  if (delta_t > 0.0 && t < t_off + delta_t) {
    const double s = std::sin(0.5 * M_PI * (t - t_off) / delta_t);
    return 1.0 - s * s;
  }
  return 0.0;
}

void Schedule::validate() const {
  if (t_off < 0.0 || delta_t < 0.0)
    throw std::invalid_argument("Schedule: t_off and delta_t must be >= 0");
}

double IntegratorConfig::resolved_dt(const ModelParams& params) const {
  if (dt > 0.0) return dt;
  return 0.25 / std::max({params.delta, params.gamma, params.rabi()});
}

int IntegratorConfig::resolved_sample_every(const ModelParams& params) const {
  if (sample_every > 0) return sample_every;
  return std::max(1L, std::lround(0.5 / resolved_dt(params)));
}

void IntegratorConfig::validate(const ModelParams& params) const {
  const double h = resolved_dt(params);
  if (!(h > 0.0)) throw std::invalid_argument("IntegratorConfig: dt must be > 0");
  const double fastest = std::max({params.delta, params.gamma, params.rabi()});
  if (h * fastest > 0.3 + 1e-12)
    throw std::invalid_argument(
        "IntegratorConfig: dt * max(delta, gamma, Omega) = " +
        std::to_string(h * fastest) + " violates the stability heuristic (<= 0.3)");
  if (to_stationary && method == Method::rk4)
    throw std::invalid_argument(
        "IntegratorConfig: stationary extension requires the propagator method");
}

complex_matrix dissipator(const complex_matrix& rho, const ModelParams& params) {
  params.validate();
  const TruncatedSpace space = params.space();
  if (rho.rows() != space.dim_total() || rho.cols() != space.dim_total())
    throw std::invalid_argument("dissipator: dimension mismatch");
  Workspace ws(params);
  complex_matrix out = complex_matrix::Zero(rho.rows(), rho.cols());
  ws.add_dissipator(rho, out);
  return out;
}

complex_matrix rhs(const complex_matrix& rho, double t, const ModelParams& params,
                   const Schedule& schedule) {
  params.validate();
  Workspace ws(params);
  complex_matrix out;
  ws.rhs_into(rho, schedule.lambda(t), out);
  return out;
}

DensityMatrix initial_state(const ModelParams& params, int n_in) {
  params.validate();
  if (n_in < 0 || n_in > params.n_max)
    throw std::invalid_argument("initial_state: require 0 <= n_in <= n_max");
  const TruncatedSpace space = params.space();
  const DressedBasis basis = dressed_states(params.g1, params.g2, params.delta);
  complex_vector v = complex_vector::Zero(space.dim_total());
  for (int e = 0; e < 3; ++e) v(e * space.dim_vib() + n_in) = basis.state[1](e);
  DensityMatrix dm;
  dm.rho = v * v.adjoint();
  dm.t = 0.0;
  return dm;
}

namespace {

void kron_add(complex_matrix& target, const complex_matrix& a, const complex_matrix& b,
              complexd scale) {
  const int d = a.rows();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const complexd f = scale * a(i, j);
      if (f == complexd(0.0, 0.0)) continue;
      target.block(i * d, j * d, d, d) += f * b;
    }
}

}  // namespace

complex_matrix liouvillian_matrix(const ModelParams& params, double lambda) {
  params.validate();
  Workspace ws(params);
  const int d = ws.d;
  const complex_matrix hs = ws.h0s + lambda * ws.v;
  const complex_matrix id = complex_matrix::Identity(d, d);

  complex_matrix L = complex_matrix::Zero(d * d, d * d);
  kron_add(L, id, hs, complexd(0.0, -1.0));
  kron_add(L, hs.transpose(), id, complexd(0.0, 1.0));

  if (params.gamma > 0.0) {
    const complex_matrix ivib = complex_matrix::Identity(ws.nv, ws.nv);
    complex_matrix anticomm = complex_matrix::Zero(d, d);
    for (int j = 0; j < 2; ++j)
      for (int sign : {+1, -1}) {
        const complex_matrix& disp = (sign > 0) ? ws.dp : ws.dm;
        const complex_matrix sig = embed(ketbra3(j, 2), disp, ws.space);
        kron_add(L, sig.conjugate(), sig, complexd(0.25 * params.gamma, 0.0));
        anticomm += 0.25 * params.gamma * (sig.adjoint() * sig);
      }
    kron_add(L, id, anticomm, complexd(-0.5, 0.0));
    kron_add(L, anticomm.transpose(), id, complexd(-0.5, 0.0));
  }
  return L;
}

complex_matrix matrix_exponential(const complex_matrix& a0) {
  const int n = a0.rows();
  const double norm = inf_norm(a0);
  int s = 0;
  if (norm > 0.5) s = int(std::ceil(std::log2(norm / 0.5)));
  complex_matrix a = a0 * std::exp2(double(-s));

  complex_matrix result = complex_matrix::Identity(n, n) + a;
  complex_matrix term = a, tmp(n, n);
  for (int k = 2; k <= 40; ++k) {
    tmp.noalias() = term * a;
    term = tmp / double(k);
    result += term;
    if (inf_norm(term) < 1e-17 * (1.0 + inf_norm(result))) break;
  }
  for (int i = 0; i < s; ++i) {
    tmp.noalias() = result * result;
    result.swap(tmp);
  }
  return result;
}

TimeSeries integrate(const DensityMatrix& rho0, double t_end,
                     const ModelParams& params, const Schedule& schedule,
                     const IntegratorConfig& config,
                     const std::vector<SampleObserver>& observers) {
  params.validate();
  schedule.validate();
  config.validate(params);
  if (!(t_end > rho0.t)) throw std::invalid_argument("integrate: t_end must exceed rho0.t");
  const TruncatedSpace space = params.space();
  if (rho0.rho.rows() != space.dim_total() || rho0.rho.cols() != space.dim_total())
    throw std::invalid_argument("integrate: state dimension mismatch");

  const Workspace ws(params);
  const double dt = config.resolved_dt(params);
  const int sample_every = config.resolved_sample_every(params);
  const double sample_interval = dt * sample_every;

  Recorder rec(ws, observers);
  complex_matrix rho = rho0.rho;
  double t = rho0.t;
  rec.sample(t, rho);

  const auto segments = plan_segments(schedule, rho0.t, t_end);
  std::unique_ptr<ConstantPropagator> tail_prop;
  double tail_lambda = 1.0;

  for (const auto& seg : segments) {
    if (seg.ramp || config.method == IntegratorConfig::Method::rk4) {
      tail_prop.reset();
      rk4_segment(ws, schedule, seg, dt, sample_every, rho, rec);
      t = seg.t1;
      continue;
    }
    const long n_steps =
        std::max(1L, std::lround((seg.t1 - seg.t0) / sample_interval));
    const double step = (seg.t1 - seg.t0) / double(n_steps);
    tail_prop = std::make_unique<ConstantPropagator>(ws, params, seg.lambda, step);
    tail_lambda = seg.lambda;
    for (long k = 1; k <= n_steps; ++k) {
      tail_prop->apply(rho);
      t = seg.t0 + k * step;
      rec.sample(t, rho);
    }
  }

  if (config.to_stationary) {
    if (!tail_prop)
      throw std::invalid_argument(
          "integrate: stationary extension requires a constant-lambda final "
          "stretch under the propagator method");
    complex_matrix r;
    const int chunk = 32;
    bool converged = false;
    while (!converged) {
      for (int k = 0; k < chunk; ++k) {
        tail_prop->apply(rho);
        t += tail_prop->step();
        rec.sample(t, rho);
      }
      ws.rhs_into(rho, tail_lambda, r);
      if (r.norm() < config.stationary_rhs_tol) {
        converged = true;
      } else if (t > config.t_cap) {
        throw tolerance_error(
            "integrate: stationary state not reached by t_cap = " +
            std::to_string(config.t_cap) + " (||rhs|| = " + std::to_string(r.norm()) +
            ")");
      } else if (tail_prop->step() < 128.0) {
        tail_prop->double_step();
      }
    }
  }

  return rec.take();
}

}  // namespace eitsim
