#include <doctest.h>

#include "eitsim/lindblad_engine.hpp"
#include "test_helpers.hpp"

using namespace eitsim;
using test_util::random_density;
using test_util::random_hermitian;

namespace {

ModelParams small_params(double gamma_2piMHz, int n_max) {
  return ModelParams::from_paper_units(1.34, 0.134, 15.0, gamma_2piMHz, 0.03, 0.1,
                                       n_max);
}

// straight Lindblad-form evaluation used as an oracle for the block version
complex_matrix dissipator_direct(const complex_matrix& rho, const ModelParams& p) {
  const TruncatedSpace space = p.space();
  complex_matrix out = complex_matrix::Zero(rho.rows(), rho.cols());
  for (int j = 0; j < 2; ++j)
    for (int sign : {+1, -1}) {
      complex_matrix el = complex_matrix::Zero(3, 3);
      el(j, 2) = 1.0;
      const complex_matrix sig = embed(el, displacement_op(p.eta, sign, space), space);
      const complex_matrix sd = sig.adjoint() * sig;
      out += 0.25 * p.gamma *
             (sig * rho * sig.adjoint() - 0.5 * (sd * rho + rho * sd));
    }
  return out;
}

complex_matrix stationary_from_kernel(const ModelParams& p) {
  const int d = p.space().dim_total();
  const complex_matrix L = liouvillian_matrix(p, 1.0);
  Eigen::FullPivLU<complex_matrix> lu(L);
  lu.setThreshold(1e-9);
  const complex_matrix kernel = lu.kernel();
  REQUIRE(kernel.cols() >= 1);
  complex_matrix rho = Eigen::Map<const complex_matrix>(kernel.col(0).data(), d, d);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TEST_CASE("dissipator annihilates states without excited population") {
  const ModelParams p = small_params(0.6, 5);
  const TruncatedSpace space = p.space();
  const int nv = space.dim_vib();
  std::mt19937 rng(61);
  complex_matrix rho = complex_matrix::Zero(space.dim_total(), space.dim_total());
  rho.block(0, 0, 2 * nv, 2 * nv) = random_density(2 * nv, rng);
  CHECK(dissipator(rho, p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dissipator is traceless and Hermiticity-preserving") {
  const ModelParams p = small_params(2.0, 5);
  std::mt19937 rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const complex_matrix rho = random_hermitian(p.space().dim_total(), rng);
    const complex_matrix l = dissipator(rho, p);
    CHECK(std::abs(l.trace()) < 1e-12 * p.gamma * rho.cwiseAbs().maxCoeff());
    CHECK((l - l.adjoint()).cwiseAbs().maxCoeff() <
          1e-13 * p.gamma * rho.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("at eta = 0 the excited diagonal drains at rate gamma") {
  ModelParams p = small_params(0.9, 6);
  p.eta = 0.0;
  const TruncatedSpace space = p.space();
  std::mt19937 rng(71);
  const complex_matrix rho = random_density(space.dim_total(), rng);
  const complex_matrix l = dissipator(rho, p);
  for (int n = 0; n <= p.n_max; ++n) {
    const int i = space.index(2, n);
    CHECK(l(i, i).real() ==
          doctest::Approx(-p.gamma * rho(i, i).real()).epsilon(1e-12));
  }
}

TEST_CASE("block dissipator matches the direct Lindblad form") {
  const ModelParams p = small_params(1.7, 6);
  std::mt19937 rng(73);
  for (int trial = 0; trial < 4; ++trial) {
    const complex_matrix rho = random_hermitian(p.space().dim_total(), rng);
    CHECK((dissipator(rho, p) - dissipator_direct(rho, p)).cwiseAbs().maxCoeff() <
          1e-13 * p.gamma * rho.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("rhs is Hermitian, traceless, and matches the textbook assembly") {
  const ModelParams p = small_params(0.8, 5);
  const Schedule constant;
  std::mt19937 rng(79);
  const complex_matrix rho = random_hermitian(p.space().dim_total(), rng);
  const complex_matrix r = rhs(rho, 0.0, p, constant);
  CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(std::abs(r.trace()) < 1e-11);

  const complex_matrix h = hamiltonian_total(p, 1.0);
  const complex_matrix expected =
      complexd(0.0, -1.0) * (h * rho - rho * h) + dissipator_direct(rho, p);
  CHECK((r - expected).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("vectorized generator reproduces the right-hand side") {
  const ModelParams p = small_params(1.2, 4);
  const int d = p.space().dim_total();
  const Schedule constant;
  const complex_matrix L = liouvillian_matrix(p, 1.0);
  std::mt19937 rng(83);
  for (int trial = 0; trial < 4; ++trial) {
    const complex_matrix rho = random_hermitian(d, rng);
    const complex_matrix r = rhs(rho, 0.0, p, constant);
    const complex_vector lhs =
        L * Eigen::Map<const complex_vector>(rho.data(), d * d);
    CHECK((lhs - Eigen::Map<const complex_vector>(r.data(), d * d)).cwiseAbs().maxCoeff() <
          1e-11);
  }
}

TEST_CASE("kernel of the generator is a fixed point of the right-hand side") {
  const ModelParams p = small_params(2.0, 5);
  const complex_matrix rho_stat = stationary_from_kernel(p);
  const Schedule constant;
  CHECK(rhs(rho_stat, 0.0, p, constant).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("initial state is the pure dressed dark state at n_in") {
  const ModelParams p = small_params(0.2, 8);
  const DensityMatrix rho0 = initial_state(p, 3);
  const TruncatedSpace space = p.space();
  CHECK(negativity(rho0.rho, space) < 1e-12);
  CHECK(mean_n(rho0.rho, space) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs((rho0.rho * rho0.rho).trace().real() - 1.0) < 1e-12);  // pure
  CHECK(fidelity_dark(initial_state(p, 0).rho, p) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(initial_state(p, 9), std::invalid_argument);
}

TEST_CASE("schedule is continuous, monotone, and hits the documented values") {
  Schedule s;
  s.mode = Schedule::Mode::ramp;
  s.t_off = 10.0;
  s.delta_t = 4.0;
  CHECK(s.lambda(0.0) == 1.0);
  CHECK(s.lambda(9.999) == 1.0);
  CHECK(s.lambda(12.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.lambda(14.0) == 0.0);
  CHECK(s.lambda(1e5) == 0.0);
  double prev = 2.0;
  for (double t = 0.0; t <= 16.0; t += 0.01) {
    const double lam = s.lambda(t);
    CHECK(lam <= prev + 1e-12);  // monotone non-increasing
    CHECK(std::abs(lam - s.lambda(t - 0.005)) < 0.01);  // no jumps
    prev = lam;
  }
  s.t_off = -1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("integrator config defaults and validation") {
  const ModelParams p = small_params(0.2, 8);
  IntegratorConfig c;
  CHECK(c.resolved_dt(p) == doctest::Approx(0.25 / p.rabi()).epsilon(1e-12));
  CHECK(c.resolved_dt(p) * std::max({p.delta, p.gamma, p.rabi()}) <= 0.3);
  c.dt = 1.0;  // grossly unstable for RK4
  c.method = IntegratorConfig::Method::rk4;
  CHECK_THROWS_AS(c.validate(p), std::invalid_argument);
  IntegratorConfig c2;
  c2.method = IntegratorConfig::Method::rk4;
  c2.to_stationary = true;
  CHECK_THROWS_AS(c2.validate(p), std::invalid_argument);
}

TEST_CASE("closed-system eigenstate stays put") {
  ModelParams p = small_params(0.0, 8);
  const TruncatedSpace space = p.space();
  const complex_matrix h = hamiltonian_total(p, 1.0);
  Eigen::SelfAdjointEigenSolver<complex_matrix> es(h);

  // pick the eigenvector most concentrated away from the truncation edge
  int best = 0;
  double best_tail = 1e300;
  for (int k = 0; k < es.eigenvectors().cols(); ++k) {
    double tail = 0.0;
    for (int e = 0; e < 3; ++e)
      for (int n = p.n_max - 2; n <= p.n_max; ++n)
        tail += std::norm(es.eigenvectors()(space.index(e, n), k));
    if (tail < best_tail) {
      best_tail = tail;
      best = k;
    }
  }
  const complex_vector v = es.eigenvectors().col(best);
  DensityMatrix rho0;
  rho0.rho = v * v.adjoint();

  const Schedule constant;
  for (auto method : {IntegratorConfig::Method::precomputed_propagator,
                      IntegratorConfig::Method::rk4}) {
    IntegratorConfig c;
    c.method = method;
    const TimeSeries ts = integrate(rho0, method == IntegratorConfig::Method::rk4
                                              ? 5.0
                                              : 50.0,
                                    p, constant, c);
    // negativity / mean_n of an eigenstate projector are conserved
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(std::abs(ts.mean_n[i] - ts.mean_n[0]) < 1e-8);
      CHECK(std::abs(ts.negativity[i] - ts.negativity[0]) < 1e-8);
    }
  }
}

TEST_CASE("undamped run oscillates with the avoided-crossing period") {
  // stronger weak laser shortens the period so the test stays fast
  ModelParams p;
  p.g1 = two_pi * 1.34;
  p.g2 = two_pi * 0.268;
  p.delta = two_pi * 15.0;
  p.gamma = 0.0;
  p.eta = 0.1;
  p.n_max = 12;
  p.omega = 0.5 * (p.rabi() - p.delta);  // exactly on resonance
  const int n_in = 2;
  const double gap = lz_gap(p, n_in).exact;
  const double period = M_PI / gap;

  IntegratorConfig c;
  c.sample_every = 0;
  const TimeSeries ts =
      integrate(initial_state(p, n_in), 2.3 * period, p, Schedule{}, c);

  // crest positions by windowed argmax (small multi-pair ripples ride on
  // each crest, so raw local maxima are unreliable)
  auto crest = [&](double lo, double hi) {
    double bt = -1.0, bv = -1.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (ts.t[i] >= lo && ts.t[i] <= hi && ts.negativity[i] > bv) {
        bv = ts.negativity[i];
        bt = ts.t[i];
      }
    return std::make_pair(bt, bv);
  };
  const auto [t1, v1] = crest(0.0, 1.0 * period);
  const auto [t2, v2] = crest(t1 + 0.5 * period, t1 + 1.5 * period);
  CHECK(std::abs((t2 - t1) - period) / period < 0.10);
  CHECK(std::abs(v1 - 0.5) < 0.05);
  CHECK(std::abs(v2 - 0.5) < 0.05);
}

TEST_CASE("purity is conserved without spontaneous emission") {
  ModelParams p = small_params(0.0, 8);
  IntegratorConfig c;
  c.method = IntegratorConfig::Method::rk4;
  c.sample_every = 100;
  const double dt = c.resolved_dt(p);
  complex_matrix last;
  std::vector<SampleObserver> obs{[&](double, const complex_matrix& r) { last = r; }};
  integrate(initial_state(p, 1), 100.0 * dt, p, Schedule{}, c, obs);
  CHECK(std::abs((last * last).trace().real() - 1.0) < 1e-8);
}

TEST_CASE("RK4 and the precomputed propagator agree") {
  ModelParams p = small_params(0.2, 8);
  const int n_in = 1;
  const double t_end = 50.0;

  IntegratorConfig c;
  c.dt = 0.0025;
  c.sample_every = 200;  // exact 0.5 us grid shared by both methods
  c.method = IntegratorConfig::Method::rk4;
  const TimeSeries a = integrate(initial_state(p, n_in), t_end, p, Schedule{}, c);
  c.method = IntegratorConfig::Method::precomputed_propagator;
  const TimeSeries b = integrate(initial_state(p, n_in), t_end, p, Schedule{}, c);

  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a.t[i] == doctest::Approx(b.t[i]).epsilon(1e-12));
    worst = std::max(worst, std::abs(a.negativity[i] - b.negativity[i]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("negativity is frozen once the lasers are off") {
  ModelParams p = small_params(0.0, 10);
  Schedule s;
  s.mode = Schedule::Mode::ramp;
  s.t_off = 30.0;
  s.delta_t = 5.0;
  IntegratorConfig c;
  const TimeSeries ts = integrate(initial_state(p, 2), 90.0, p, s, c);
  double frozen = -1.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts.t[i] < s.t_off + s.delta_t + 1e-9) continue;
    if (frozen < 0.0) frozen = ts.negativity[i];
    CHECK(std::abs(ts.negativity[i] - frozen) < 1e-9);
  }
  CHECK(frozen > 0.0);
}

TEST_CASE("step refinement converges at fourth order") {
  ModelParams p = small_params(0.6, 6);
  const double t_end = 10.0;

  auto final_state = [&](IntegratorConfig c) {
    complex_matrix last;
    std::vector<SampleObserver> obs{[&](double, const complex_matrix& r) { last = r; }};
    c.sample_every = 1 << 20;  // final sample only
    integrate(initial_state(p, 1), t_end, p, Schedule{}, c, obs);
    return last;
  };

  auto rk4_final = [&](double dt) {
    IntegratorConfig c;
    c.method = IntegratorConfig::Method::rk4;
    c.dt = dt;
    return final_state(c);
  };
  // successive halvings: ||rho(h) - rho(h/2)|| shrinks ~16x per halving
  const double h0 = 0.003;
  const complex_matrix r0 = rk4_final(h0);
  const complex_matrix r1 = rk4_final(0.5 * h0);
  const complex_matrix r2 = rk4_final(0.25 * h0);
  const double d01 = (r0 - r1).cwiseAbs().maxCoeff();
  const double d12 = (r1 - r2).cwiseAbs().maxCoeff();
  REQUIRE(d01 > 1e-13);  // above the roundoff floor
  CHECK(d01 / d12 > 8.0);
  CHECK(d01 / d12 < 40.0);
}

TEST_CASE("truncation breach aborts with a suggested n_max") {
  ModelParams p = small_params(0.2, 8);
  try {
    integrate(initial_state(p, 7), 10.0, p, Schedule{}, IntegratorConfig{});
    FAIL("expected truncation_error");
  } catch (const truncation_error& e) {
    CHECK(e.suggested_n_max == p.n_max + 6);
    CHECK(std::string(e.what()).find("n_max") != std::string::npos);
  }
}

TEST_CASE("stationary extension reaches the kernel state") {
  const ModelParams p = small_params(2.0, 6);
  IntegratorConfig c;
  c.to_stationary = true;
  c.stationary_rhs_tol = 1e-10;
  complex_matrix last;
  std::vector<SampleObserver> obs{[&](double, const complex_matrix& r) { last = r; }};
  const TimeSeries ts = integrate(initial_state(p, 1), 30.0, p, Schedule{}, c, obs);
  const Schedule constant;
  CHECK(rhs(last, ts.t.back(), p, constant).norm() < 1e-10);

  const complex_matrix rho_kernel = stationary_from_kernel(p);
  const TruncatedSpace space = p.space();
  CHECK(std::abs(negativity(last, space) - negativity(rho_kernel, space)) < 1e-6);
  CHECK(std::abs(mean_n(last, space) - mean_n(rho_kernel, space)) < 1e-6);
}

TEST_CASE("diagnostics stay clean on an accepted run") {
  const ModelParams p = small_params(0.6, 8);
  const TimeSeries ts = integrate(initial_state(p, 1), 40.0, p, Schedule{},
                                  IntegratorConfig{});
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(ts.trace_drift[i] < 1e-8);
    CHECK(ts.min_eig[i] > -1e-8);
    CHECK(ts.tail_pop[i] < 1e-4);
  }
  CHECK(std::is_sorted(ts.t.begin(), ts.t.end()));
  for (std::size_t i = 1; i < ts.size(); ++i)
    CHECK(ts.photon_count[i] >= ts.photon_count[i - 1]);
}
