#include <cmath>

#include "doctest.h"
#include "uio/errors.hpp"
#include "uio/lmi.hpp"
#include "uio/sdp.hpp"

using namespace uio;

TEST_CASE("variable layout packs and unpacks every structure") {
  VariableLayout layout;
  layout.add_diagonal("P", 2);
  layout.add_symmetric("Q", 2);
  layout.add_rectangular("X", 2, 3);
  layout.add_scalar("kappa");
  REQUIRE(layout.total() == 2 + 3 + 6 + 1);

  Vector x(layout.total());
  for (int i = 0; i < x.size(); ++i) x(i) = i + 1;

  Vector P = layout.diagonal_value("P", x);
  CHECK(P(0) == 1.0);
  CHECK(P(1) == 2.0);

  // symmetric packing: lower triangle column-major (0,0), (1,0), (1,1)
  Matrix Q = layout.symmetric_value("Q", x);
  CHECK(Q(0, 0) == 3.0);
  CHECK(Q(1, 0) == 4.0);
  CHECK(Q(0, 1) == 4.0);
  CHECK(Q(1, 1) == 5.0);

  // rectangular packing: row-major
  Matrix X = layout.rectangular_value("X", x);
  CHECK(X(0, 0) == 6.0);
  CHECK(X(0, 2) == 8.0);
  CHECK(X(1, 0) == 9.0);
  CHECK(X(1, 2) == 11.0);

  CHECK(layout.scalar_value("kappa", x) == 12.0);
}

TEST_CASE("layout lookups are kind- and name-checked") {
  VariableLayout layout;
  layout.add_diagonal("P", 2);
  Vector x = Vector::Zero(2);
  CHECK_THROWS_AS(layout.symmetric_value("P", x), ValidationError);
  CHECK_THROWS_AS(layout.diagonal_value("missing", x), ValidationError);
}

TEST_CASE("constraints are probed into affine form") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  prob.add_constraint(
      "box",
      [](const Vector& x) {
        Matrix m(2, 2);
        m << x(0) - 1.0, 0.0, 0.0, 2.0 - x(0);
        return m;
      },
      ConstraintSense::PositiveDefinite, 0.0);
  REQUIRE(prob.constraints.size() == 1);
  const LmiConstraint& c = prob.constraints[0];
  Vector x(1);
  x << 1.25;
  Matrix v = prob.constraint_value(c, x);
  CHECK(v(0, 0) == doctest::Approx(0.25));
  CHECK(v(1, 1) == doctest::Approx(0.75));
}

TEST_CASE("negative-definite sense flips the stored block") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  prob.add_constraint(
      "flip",
      [](const Vector& x) { return Matrix::Constant(1, 1, x(0)); },
      ConstraintSense::NegativeDefinite, 0.5);
  Vector x(1);
  x << -2.0;
  // stored as -expr - eps I: 2 - 0.5
  CHECK(prob.constraint_value(prob.constraints[0], x)(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("asymmetric assemblers are rejected") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  CHECK_THROWS_AS(prob.add_constraint(
                      "bad",
                      [](const Vector& x) {
                        Matrix m(2, 2);
                        m << 0.0, 1.0, -1.0, x(0);
                        return m;
                      },
                      ConstraintSense::PositiveDefinite, 0.0),
                  ValidationError);
}

TEST_CASE("affinity audit separates affine from nonlinear assemblers") {
  auto affine = [](const Vector& x) {
    Matrix m(2, 2);
    m << x(0) + 2.0 * x(1), x(1), x(1), 1.0 - x(0);
    return m;
  };
  CHECK(affinity_defect(affine, 2) <= 1e-12);

  auto quadratic = [](const Vector& x) {
    return Matrix::Constant(1, 1, x(0) * x(0));
  };
  CHECK(affinity_defect(quadratic, 1) > 1e-3);
}

TEST_CASE("interval feasibility problem solves strictly") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  prob.add_constraint(
      "interval",
      [](const Vector& x) {
        Matrix m(2, 2);
        m << x(0) - 1.0, 0.0, 0.0, 2.0 - x(0);
        return m;
      },
      ConstraintSense::PositiveDefinite, 0.0);
  SdpResult r = solve_feasibility(prob);
  REQUIRE(r.status == SdpStatus::Feasible);
  CHECK(r.x(0) > 1.0);
  CHECK(r.x(0) < 2.0);
  CHECK(r.slack < 0.0);
}

TEST_CASE("Lyapunov inequality for a stable matrix is found feasible") {
  Matrix A(2, 2);
  A << 0.0, 1.0, -2.0, -3.0;
  LmiProblem prob;
  prob.layout.add_symmetric("Q", 2);
  auto lyap = [&A](const Vector& x) {
    Matrix Q(2, 2);
    Q << x(0), x(1), x(1), x(2);
    return Matrix(A.transpose() * Q + Q * A);
  };
  auto identity_floor = [](const Vector& x) {
    Matrix Q(2, 2);
    Q << x(0), x(1), x(1), x(2);
    return Matrix(Q - Matrix::Identity(2, 2));
  };
  prob.add_constraint("decrease", lyap, ConstraintSense::NegativeDefinite, 1.0);
  prob.add_constraint("floor", identity_floor, ConstraintSense::PositiveDefinite, 0.0);
  SdpResult r = solve_feasibility(prob);
  REQUIRE(r.status == SdpStatus::Feasible);
  Matrix Q = prob.layout.symmetric_value("Q", r.x);
  CHECK(sym_eig_min(Q) >= 1.0 - 1e-9);
  CHECK(sym_eig_max(Matrix(A.transpose() * Q + Q * A)) <= -1.0 + 1e-9);
}

TEST_CASE("contradictory constraints are certified infeasible") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  prob.add_constraint(
      "ge1", [](const Vector& x) { return Matrix::Constant(1, 1, x(0) - 1.0); },
      ConstraintSense::PositiveDefinite, 0.0);
  prob.add_constraint(
      "lem1", [](const Vector& x) { return Matrix::Constant(1, 1, -1.0 - x(0)); },
      ConstraintSense::PositiveDefinite, 0.0);
  SdpResult r = solve_feasibility(prob);
  CHECK(r.status == SdpStatus::Infeasible);
  CHECK(r.slack > 0.0);
  CHECK(r.message.find("slack") != std::string::npos);
}

TEST_CASE("thin infeasibility margins are still detected") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  // x >= eps and x <= -eps with eps = 1e-3: infeasible by 2e-3
  prob.add_constraint(
      "up", [](const Vector& x) { return Matrix::Constant(1, 1, x(0)); },
      ConstraintSense::PositiveDefinite, 1e-3);
  prob.add_constraint(
      "down", [](const Vector& x) { return Matrix::Constant(1, 1, -x(0)); },
      ConstraintSense::PositiveDefinite, 1e-3);
  SdpResult r = solve_feasibility(prob);
  CHECK(r.status == SdpStatus::Infeasible);
}

TEST_CASE("an always-satisfiable block exits early with deep slack") {
  LmiProblem prob;
  prob.layout.add_scalar("a");
  prob.add_constraint(
      "easy", [](const Vector& x) { return Matrix::Constant(1, 1, x(0) + 5.0); },
      ConstraintSense::PositiveDefinite, 0.0);
  SdpOptions opt;
  SdpResult r = solve_feasibility(prob, opt);
  REQUIRE(r.status == SdpStatus::Feasible);
  CHECK(r.slack <= -opt.desired_slack);
  CHECK(r.newton_iterations < opt.max_newton_total);
}
