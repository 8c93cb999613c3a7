#include <cmath>

#include "doctest.h"
#include "uio/config.hpp"
#include "uio/errors.hpp"
#include "uio/simulation.hpp"
#include "uio/synthesis.hpp"

using namespace uio;

namespace {

std::function<Vector(const Vector&)> no_source() {
  return [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
}

double bump(double z) {
  if (z <= 0.1 || z >= 0.7) return 0.0;
  double s = std::sin(M_PI * (z - 0.1) / 0.6);
  return s * s * s * s;
}

}  // namespace

TEST_CASE("signal components evaluate as specified") {
  SignalComponent c;
  c.kind = SignalComponent::Kind::Constant;
  c.value = 2.5;
  CHECK(c.eval(17.0) == 2.5);

  c.kind = SignalComponent::Kind::Sinusoid;
  c.amplitude = 5.0;
  c.frequency = 3.0;
  c.phase = 0.0;
  CHECK(c.eval(0.7) == doctest::Approx(5.0 * std::sin(2.1)));
  c.cosine = true;
  CHECK(c.eval(0.7) == doctest::Approx(5.0 * std::cos(2.1)));

  c.kind = SignalComponent::Kind::Table;
  c.t_samples = {0.0, 1.0, 3.0};
  c.v_samples = {0.0, 2.0, -2.0};
  CHECK(c.eval(0.5) == doctest::Approx(1.0));
  CHECK(c.eval(2.0) == doctest::Approx(0.0));
  CHECK(c.eval(-5.0) == doctest::Approx(0.0));  // clamped
  CHECK(c.eval(9.0) == doctest::Approx(-2.0));

  CHECK(SignalSpec::zero(3).eval(1.0).norm() == 0.0);
  CHECK(SignalSpec::sinusoid(1.0, 2.0).eval(M_PI / 4.0)(0) ==
        doctest::Approx(std::sin(M_PI / 2.0)));
}

TEST_CASE("both schemes shift exactly at unit Courant number") {
  const int N = 64;
  const double dz = 1.0 / N, dt = dz;
  auto Lambda = LambdaField::from_constant(Vector::Ones(1));
  Matrix field(1, N);
  for (int i = 0; i < N; ++i) field(0, i) = bump((i + 0.5) * dz);
  Vector inflow = Vector::Constant(1, 0.25);

  for (Scheme s : {Scheme::Upwind1, Scheme::LaxFriedrichs2}) {
    Matrix out = step_pde(field, Lambda, no_source(), dt, dz, inflow, s);
    CHECK(std::abs(out(0, 0) - 0.25) <= 1e-14);
    for (int i = 1; i < N; ++i) CHECK(std::abs(out(0, i) - field(0, i - 1)) <= 1e-14);
  }
}

TEST_CASE("step guards: CFL, shapes, finiteness") {
  auto Lambda = LambdaField::from_constant(Vector::Constant(1, 2.0));
  Matrix field = Matrix::Zero(1, 10);
  Vector inflow = Vector::Zero(1);
  CHECK_THROWS_AS(
      step_pde(field, Lambda, no_source(), 0.2, 0.1, inflow, Scheme::Upwind1),
      NumericFault);  // dt*speed/dz = 4
  CHECK_NOTHROW(
      step_pde(field, Lambda, no_source(), 0.05, 0.1, inflow, Scheme::Upwind1));
  Matrix bad = field;
  bad(0, 3) = std::nan("");
  CHECK_THROWS_AS(
      step_pde(bad, Lambda, no_source(), 0.05, 0.1, inflow, Scheme::Upwind1),
      NumericFault);
  CHECK_THROWS_AS(
      step_pde(field, Lambda, no_source(), 0.05, 0.1, Vector::Zero(2), Scheme::Upwind1),
      ValidationError);
}

TEST_CASE("transport convergence orders on a smooth compactly supported pulse") {
  auto Lambda = LambdaField::from_constant(Vector::Ones(1));
  const double T = 0.2, cfl = 0.5;
  auto l2_error = [&](int N, Scheme scheme) {
    const double dz = 1.0 / N;
    const int steps = static_cast<int>(std::lround(T / (cfl * dz)));
    const double dt = T / steps;
    Matrix field(1, N);
    for (int i = 0; i < N; ++i) field(0, i) = bump((i + 0.5) * dz);
    Vector inflow = Vector::Zero(1);
    for (int k = 0; k < steps; ++k)
      field = step_pde(field, Lambda, no_source(), dt, dz, inflow, scheme);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
      double diff = field(0, i) - bump((i + 0.5) * dz - T);
      acc += diff * diff * dz;
    }
    return std::sqrt(acc);
  };

  double up_ratio = l2_error(100, Scheme::Upwind1) / l2_error(200, Scheme::Upwind1);
  CHECK(up_ratio > 1.7);
  CHECK(up_ratio < 2.3);

  double lf_ratio =
      l2_error(100, Scheme::LaxFriedrichs2) / l2_error(200, Scheme::LaxFriedrichs2);
  CHECK(lf_ratio > 3.2);
  CHECK(lf_ratio < 4.8);
}

TEST_CASE("time step selection honors the Courant limit and the horizon") {
  ProblemConfig cfg = builtin_config("example1");
  SynthesisResult res = solve_detectable(cfg.plant, cfg.synthesis);
  REQUIRE(res.feasible);

  SimulationInputs in;
  in.u = cfg.u;
  in.w = cfg.w;
  in.initial = cfg.initial;
  in.grid.cells = 10;
  in.grid.t_final = 1.0;
  in.grid.cfl = 0.9;
  SimulationTrace tr = simulate(cfg.plant, res.gains, in);
  // max speed 2 at z=1, dz=0.1: dt_raw = 0.045, 23 steps of 1/23
  CHECK(tr.t.size() == 24);
  CHECK(tr.dt == doctest::Approx(1.0 / 23.0).epsilon(1e-15));
  CHECK(tr.t.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tr.dt * 2.0 / tr.dz <= 0.9 + 1e-12);
  CHECK(tr.chi.cols() == 24);
  CHECK(tr.err_sq.size() == 24);

  // recorded estimate always satisfies chi_hat = psi + H y1
  const Matrix HCM = res.gains.H * cfg.plant.C * cfg.plant.M;
  for (int k : {0, 11, 23}) {
    Vector expect = tr.psi.col(k) + HCM * tr.chi.col(k);
    CHECK(max_abs(Matrix(tr.chi_hat.col(k) - expect)) <= 1e-12);
  }
}

TEST_CASE("matched initialization rejects the unknown input to round-off") {
  ProblemConfig cfg = builtin_config("example1");
  SynthesisResult res = solve_detectable(cfg.plant, cfg.synthesis);
  REQUIRE(res.feasible);

  SimulationInputs in;
  in.u = cfg.u;
  in.initial = cfg.initial;
  in.initial.xhat0 = in.initial.x0;
  in.initial.chihat0 = in.initial.chi0;
  in.grid.cells = 100;
  in.grid.t_final = 5.0;

  std::vector<std::vector<double>> runs;
  for (int variant = 0; variant < 3; ++variant) {
    if (variant == 0) in.w = SignalSpec::zero(1);
    if (variant == 1) in.w = SignalSpec::sinusoid(1.0, 2.0);
    if (variant == 2) in.w = SignalSpec::sinusoid(5.0, 3.0, 0.0, true);
    SimulationTrace tr = simulate(cfg.plant, res.gains, in);
    for (double e : tr.err_sq) CHECK(e <= 1e-20);
    runs.push_back(tr.err_sq);
  }
  for (size_t k = 0; k < runs[0].size(); ++k) {
    CHECK(std::abs(runs[0][k] - runs[1][k]) <= 1e-20);
    CHECK(std::abs(runs[0][k] - runs[2][k]) <= 1e-20);
  }
}

TEST_CASE("norm and functional quadrature") {
  const int N = 1000;
  Matrix eps = Matrix::Ones(1, N);
  Vector eps_chi = Vector::Zero(2);
  CHECK(error_norm_sq(eps, eps_chi, 1.0 / N) == doctest::Approx(1.0));
  eps_chi = Vector::Ones(2);
  CHECK(error_norm_sq(eps, eps_chi, 1.0 / N) == doctest::Approx(3.0));

  SUBCASE("V reduces to the plain norm when the weight cancels the speeds") {
    auto Lambda = LambdaField::from_constant(Vector::Constant(1, 1.7));
    Vector P = Vector::Constant(1, 1.7);
    Matrix Q = Matrix::Identity(2, 2);
    Matrix wiggle(1, N);
    for (int i = 0; i < N; ++i) wiggle(0, i) = std::sin(7.0 * (i + 0.5) / N);
    Vector chi_err(2);
    chi_err << 0.3, -0.4;
    CHECK(evaluate_V(wiggle, chi_err, P, Q, 0.0, Lambda) ==
          doctest::Approx(error_norm_sq(wiggle, chi_err, 1.0 / N)).epsilon(1e-14));
  }
  SUBCASE("V integrates the exponential weight to second order") {
    auto Lambda = LambdaField::from_constant(Vector::Ones(1));
    Vector P = Vector::Ones(1);
    Matrix Q = Matrix::Zero(2, 2);
    double v = evaluate_V(eps, Vector::Zero(2), P, Q, 1.0, Lambda);
    CHECK(v == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
  }
  SUBCASE("W with zero cross weight equals V") {
    auto Lambda = LambdaField::from_function(
        1, [](double z) { return Vector(Vector::Constant(1, 1.0 + z)); });
    Vector P = Vector::Constant(1, 2.0);
    Matrix Q = 2.0 * Matrix::Identity(2, 2);
    Matrix Y = Matrix::Zero(2, 1);
    Matrix wiggle(1, 100);
    for (int i = 0; i < 100; ++i) wiggle(0, i) = std::cos(3.0 * i / 100.0);
    Vector chi_err(2);
    chi_err << 1.0, 0.5;
    CHECK(evaluate_W(wiggle, chi_err, P, Q, Y, 0.7, Lambda) ==
          doctest::Approx(evaluate_V(wiggle, chi_err, P, Q, 0.7, Lambda))
              .epsilon(1e-14));
  }
  SUBCASE("W refuses an indefinite pointwise weight") {
    auto Lambda = LambdaField::from_constant(Vector::Ones(1));
    Vector P = Vector::Ones(1);
    Matrix Q = Matrix::Identity(2, 2);
    Matrix Y = Matrix::Constant(2, 1, 5.0);  // cross term overwhelms the diagonal
    CHECK_THROWS_AS(
        evaluate_W(Matrix::Ones(1, 10), Vector::Ones(2), P, Q, Y, 0.1, Lambda),
        NumericFault);
  }
}

TEST_CASE("decay diagnostics on a clean exponential") {
  std::vector<double> t, s;
  for (int i = 0; i < 200; ++i) {
    t.push_back(5.0 * i / 199.0);
    s.push_back(std::exp(-t.back()));
  }
  DecayDiagnostics d = decay_diagnostics(s, t);
  CHECK(d.violation_count == 0);
  CHECK(d.nonpositive_count == 0);
  REQUIRE(d.rate_valid);
  CHECK(d.fitted_rate == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(d.terminal_initial_ratio == doctest::Approx(std::exp(-5.0)));
}

TEST_CASE("decay diagnostics counts rises and skips nonpositive samples") {
  std::vector<double> t, s;
  for (int i = 0; i < 20; ++i) {
    t.push_back(i);
    s.push_back(std::exp(-0.1 * i));
  }
  s[5] *= 2.0;   // a clear rise at step 5
  s[17] = 0.0;   // log-undefined point in the final half
  s[18] = -1.0;  // and another
  DecayDiagnostics d = decay_diagnostics(s, t);
  CHECK(d.violation_count >= 1);
  CHECK(d.nonpositive_count == 2);

  CHECK_THROWS_AS(decay_diagnostics({1.0, 0.5}, {0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(decay_diagnostics(s, std::vector<double>(3, 0.0)), ValidationError);
}

TEST_CASE("certificate-aware runs record the matching functional") {
  ProblemConfig cfg = builtin_config("example2");
  cfg.synthesis.mu_grid = {1.0};
  cfg.synthesis.theta_grid = {1.0};
  SynthesisResult res = solve_nondetectable(cfg.plant, cfg.synthesis);
  REQUIRE(res.feasible);

  SimulationInputs in;
  in.u = cfg.u;
  in.w = cfg.w;
  in.initial = cfg.initial;
  in.grid.cells = 40;
  in.grid.t_final = 2.0;
  in.grid.snapshot_stride = 25;
  SimulationTrace tr = simulate(cfg.plant, res.gains, in, &res.certificate);
  CHECK(tr.lyap_name == "W");
  CHECK(tr.lyap.size() == tr.t.size());
  for (double v : tr.lyap) CHECK(v > 0.0);
  CHECK(tr.snapshot_t.size() == tr.x_snapshots.size());
  CHECK(tr.x_snapshots.size() >= 2);
  CHECK(tr.x_snapshots[0].cols() == 40);

  // the recorded functional agrees with a direct evaluation at t = 0
  Matrix eps0(2, 40);
  for (int i = 0; i < 40; ++i) {
    double z = (i + 0.5) / 40.0;
    eps0.col(i) = in.initial.x0(z) - in.initial.xhat0(z);
  }
  Vector chih0 = in.initial.chihat0;
  Vector eps_chi0 = in.initial.chi0 - chih0;
  double w0 = evaluate_W(eps0, eps_chi0, res.certificate.P, res.certificate.Q,
                         res.certificate.Y, res.certificate.mu, cfg.plant.Lambda);
  CHECK(tr.lyap.front() == doctest::Approx(w0).epsilon(1e-12));
}

TEST_CASE("simulation input validation") {
  ProblemConfig cfg = builtin_config("example1");
  SynthesisResult res = solve_detectable(cfg.plant, cfg.synthesis);
  REQUIRE(res.feasible);
  SimulationInputs in;
  in.u = cfg.u;
  in.w = cfg.w;
  in.initial = cfg.initial;
  in.grid.cells = 20;
  in.grid.t_final = 0.5;

  SUBCASE("wrong disturbance dimension") {
    in.w = SignalSpec::zero(2);
    CHECK_THROWS_AS(simulate(cfg.plant, res.gains, in), ValidationError);
  }
  SUBCASE("cfl out of range") {
    in.grid.cfl = 1.5;
    CHECK_THROWS_AS(simulate(cfg.plant, res.gains, in), ValidationError);
  }
  SUBCASE("missing profiles") {
    in.initial.x0 = nullptr;
    CHECK_THROWS_AS(simulate(cfg.plant, res.gains, in), ValidationError);
  }
  SUBCASE("certificate dimension mismatch") {
    StabilityCertificate bad = res.certificate;
    bad.P = Vector::Ones(3);
    CHECK_THROWS_AS(simulate(cfg.plant, res.gains, in, &bad), ValidationError);
  }
}
