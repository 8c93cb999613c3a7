#include "uio/synthesis.hpp"

#include <cmath>
#include <limits>

#include "uio/errors.hpp"

namespace uio {

std::string to_string(CertificateMode mode) {
  return mode == CertificateMode::Detectable ? "detectable" : "nondetectable";
}

void StabilityCertificate::validate() const {
  if (P.size() == 0) throw ValidationError("certificate: P is empty");
  if (P.minCoeff() <= 0.0)
    throw ValidationError("certificate: P must be entrywise positive");
  if (Q.rows() != Q.cols() || Q.rows() == 0)
    throw ValidationError("certificate: Q must be square and nonempty");
  if (max_abs(Q - Q.transpose()) > 1e-9 * (1.0 + max_abs(Q)))
    throw ValidationError("certificate: Q must be symmetric");
  if (sym_eig_min(symmetrize(Q)) <= 0.0)
    throw ValidationError("certificate: Q must be positive definite");
  if (!(mu > 0.0)) throw ValidationError("certificate: mu must be positive");
  if (!(kappa > 0.0)) throw ValidationError("certificate: kappa must be positive");
  if (mode == CertificateMode::Nondetectable) {
    if (!(theta > 0.0))
      throw ValidationError("certificate: theta must be positive in non-detectable mode");
    if (Y.rows() != Q.rows() || Y.cols() != P.size())
      throw ValidationError("certificate: Y must be n_chi x n_x");
  }
}

std::vector<double> default_mu_grid() {
  std::vector<double> grid(25);
  for (int k = 0; k < 25; ++k) grid[k] = std::pow(10.0, -3.0 + k / 6.0);
  return grid;
}

namespace {

double auto_epsilon(const PlantSpec& plant, const SynthesisOptions& opts) {
  return opts.epsilon > 0.0 ? opts.epsilon
                            : 1e-6 * (1.0 + plant.coefficient_scale());
}

Matrix zero_or(const Matrix& m, int rows, int cols) {
  return m.size() > 0 ? m : Matrix::Zero(rows, cols);
}

struct Candidate {
  bool valid = false;
  StabilityCertificate cert;
  ObserverGains gains;
  VerificationReport verification;
  double mu = 0.0, theta = 0.0;
};

}  // namespace

VerificationReport verify_certificate(const PlantSpec& plant, const ObserverGains& gains,
                                      const StabilityCertificate& cert, int points,
                                      double tol) {
  if (points < 2) throw ValidationError("verify_certificate: need at least 2 sweep points");
  cert.validate();
  if (cert.P.size() != plant.nx())
    throw ValidationError("certificate: P length must equal the field dimension");
  if (cert.Q.rows() != plant.nchi())
    throw ValidationError("certificate: Q size must equal the ODE dimension");
  if (gains.F.rows() != plant.nchi() || gains.F.cols() != plant.nchi())
    throw ValidationError("verify_certificate: gains.F must be n_chi x n_chi");

  const Matrix L = zero_or(gains.L, plant.nchi(), plant.ny2());
  VerificationReport report;
  report.points = points;
  report.tol = tol;

  auto sweep = [&](const std::string& name, auto&& value_at) {
    VerificationReport::ConditionSweep sw;
    sw.name = name;
    sw.margin = std::numeric_limits<double>::infinity();
    sw.worst_z = 0.0;
    sw.first_violation_z = -1.0;
    for (int i = 0; i < points; ++i) {
      double z = static_cast<double>(i) / (points - 1);
      double m = value_at(z);
      if (m < sw.margin) {
        sw.margin = m;
        sw.worst_z = z;
      }
      if (m <= tol && sw.first_violation_z < 0.0) sw.first_violation_z = z;
    }
    report.conditions.push_back(sw);
  };

  if (cert.mode == CertificateMode::Detectable) {
    sweep("field decrease", [&](double z) {
      Vector dinv = plant.Lambda.diag_at(z).cwiseInverse();
      return -sym_eig_max(
          assemble_Q_matrix(dinv, cert.P, cert.kappa, cert.mu, plant));
    });
    VerificationReport::ConditionSweep fb;
    fb.name = "boundary decrease";
    fb.worst_z = -1.0;
    fb.margin = -sym_eig_max(
        assemble_F_block(cert.P, cert.Q, gains.F, L, cert.mu, plant));
    fb.first_violation_z = fb.margin <= tol ? 0.0 : -1.0;
    report.conditions.push_back(fb);
  } else {
    sweep("functional positivity", [&](double z) {
      return sym_eig_min(assemble_Pi_z(z, cert.P, cert.Q, cert.Y, cert.mu, plant.Lambda));
    });
    sweep("decrease", [&](double z) {
      return -sym_eig_max(assemble_Phi_z(z, cert.P, cert.Q, cert.Y, L, cert.kappa,
                                         cert.mu, plant, gains.F));
    });
  }

  report.margin = std::numeric_limits<double>::infinity();
  for (const auto& c : report.conditions) report.margin = std::min(report.margin, c.margin);
  report.pass = report.margin > tol;
  return report;
}

namespace {

LmiProblem build_detectable_problem(const PlantSpec& plant, const DecoupledData& dec,
                                    const VertexSet& verts, double mu, double eps,
                                    double delta, bool with_J) {
  const int n_x = plant.nx(), n_chi = plant.nchi();
  const int n_y1 = plant.ny1(), n_y2 = plant.ny2();

  LmiProblem prob;
  prob.layout.add_diagonal("P", n_x);
  prob.layout.add_symmetric("Q", n_chi);
  prob.layout.add_scalar("kappa");
  prob.layout.add_rectangular("X", n_chi, n_y1);
  if (with_J) prob.layout.add_rectangular("J", n_chi, n_y2);

  auto values = [&, with_J](const Vector& x) {
    struct Vals {
      Vector P;
      Matrix Q, X, J;
      double kappa;
    } v;
    v.P = prob.layout.diagonal_value("P", x);
    v.Q = prob.layout.symmetric_value("Q", x);
    v.kappa = prob.layout.scalar_value("kappa", x);
    v.X = prob.layout.rectangular_value("X", x);
    v.J = with_J ? prob.layout.rectangular_value("J", x) : Matrix::Zero(n_chi, n_y2);
    return v;
  };

  for (size_t i = 0; i < verts.vertices.size(); ++i) {
    Vector D = verts.vertices[i];
    prob.add_constraint(
        "field decrease vertex " + std::to_string(i),
        [&, D](const Vector& x) {
          auto v = values(x);
          return assemble_Q_matrix(D, v.P, v.kappa, mu, plant);
        },
        ConstraintSense::NegativeDefinite, eps);
  }
  prob.add_constraint(
      "boundary decrease",
      [&](const Vector& x) {
        auto v = values(x);
        return assemble_F_block_design(v.P, v.Q, v.X, v.J, mu, plant, dec.RA, dec.CM);
      },
      ConstraintSense::NegativeDefinite, eps);
  prob.add_constraint(
      "P floor",
      [&](const Vector& x) {
        Vector P = prob.layout.diagonal_value("P", x);
        return Matrix((P.array() - 1.0).matrix().asDiagonal());
      },
      ConstraintSense::PositiveDefinite, 0.0);
  prob.add_constraint(
      "Q floor",
      [&, delta](const Vector& x) {
        Matrix Q = prob.layout.symmetric_value("Q", x);
        return Matrix(Q - delta * Matrix::Identity(n_chi, n_chi));
      },
      ConstraintSense::PositiveDefinite, 0.0);
  prob.add_constraint(
      "kappa floor",
      [&, delta](const Vector& x) {
        Matrix m(1, 1);
        m(0, 0) = prob.layout.scalar_value("kappa", x) - delta;
        return m;
      },
      ConstraintSense::PositiveDefinite, 0.0);
  return prob;
}

LmiProblem build_nondetectable_problem(const PlantSpec& plant, const DecoupledData& dec,
                                       const VertexSet& speed_verts,
                                       const VertexSet& weighted_verts, double mu,
                                       double theta, double eps, double delta,
                                       bool with_J) {
  const int n_x = plant.nx(), n_chi = plant.nchi(), n_y2 = plant.ny2();

  LmiProblem prob;
  prob.layout.add_diagonal("P", n_x);
  prob.layout.add_symmetric("Q", n_chi);
  prob.layout.add_scalar("kappa");
  prob.layout.add_rectangular("Y", n_chi, n_x);
  if (with_J) prob.layout.add_rectangular("J", n_chi, n_y2);

  auto values = [&, with_J](const Vector& x) {
    struct Vals {
      Vector P;
      Matrix Q, Y, J;
      double kappa;
    } v;
    v.P = prob.layout.diagonal_value("P", x);
    v.Q = prob.layout.symmetric_value("Q", x);
    v.kappa = prob.layout.scalar_value("kappa", x);
    v.Y = prob.layout.rectangular_value("Y", x);
    v.J = with_J ? prob.layout.rectangular_value("J", x) : Matrix::Zero(n_chi, n_y2);
    return v;
  };

  for (size_t i = 0; i < weighted_verts.vertices.size(); ++i) {
    Vector Dhat = weighted_verts.vertices[i];
    prob.add_constraint(
        "functional positivity vertex " + std::to_string(i),
        [&, Dhat](const Vector& x) {
          auto v = values(x);
          return assemble_Pi_positivity(Dhat, v.P, v.Q, v.Y);
        },
        ConstraintSense::PositiveDefinite, eps);
  }
  const double omegas[2] = {1.0, std::exp(-mu)};
  for (int w = 0; w < 2; ++w) {
    for (size_t i = 0; i < speed_verts.vertices.size(); ++i) {
      Vector D = speed_verts.vertices[i];
      double omega = omegas[w];
      prob.add_constraint(
          "decrease vertex " + std::to_string(i) + (w == 0 ? " (inflow weight)"
                                                           : " (outflow weight)"),
          [&, D, omega](const Vector& x) {
            auto v = values(x);
            return assemble_big_lmi_nondetectable(omega, D, v.P, v.Q, v.Y, v.J,
                                                  v.kappa, theta, mu, plant, dec.RA);
          },
          ConstraintSense::NegativeDefinite, eps);
    }
  }
  prob.add_constraint(
      "P floor",
      [&](const Vector& x) {
        Vector P = prob.layout.diagonal_value("P", x);
        return Matrix((P.array() - 1.0).matrix().asDiagonal());
      },
      ConstraintSense::PositiveDefinite, 0.0);
  prob.add_constraint(
      "Q floor",
      [&, delta](const Vector& x) {
        Matrix Q = prob.layout.symmetric_value("Q", x);
        return Matrix(Q - delta * Matrix::Identity(n_chi, n_chi));
      },
      ConstraintSense::PositiveDefinite, 0.0);
  prob.add_constraint(
      "kappa floor",
      [&, delta](const Vector& x) {
        Matrix m(1, 1);
        m(0, 0) = prob.layout.scalar_value("kappa", x) - delta;
        return m;
      },
      ConstraintSense::PositiveDefinite, 0.0);
  return prob;
}

}  // namespace

SynthesisResult solve_detectable(const PlantSpec& plant, const SynthesisOptions& opts) {
  plant.validate();
  SynthesisResult out;
  DecoupledData dec = make_decoupled_data(plant);

  PbhResult pbh = pbh_detectability(dec.RA, dec.CM);
  if (!pbh.detectable) {
    out.message =
        "rejected at precondition: the decoupled pair is not detectable "
        "through the inflow measurement; use the non-detectable design";
    return out;
  }

  const double eps = auto_epsilon(plant, opts);
  out.epsilon = eps;
  const bool with_J = !opts.force_L_zero && plant.ny2() > 0;
  DiagBounds bounds = diag_bounds(plant.Lambda, {}, opts.lambda_grid_points);
  VertexSet verts = build_vertex_set(bounds);

  Candidate best;
  for (double mu : opts.mu_grid) {
    LmiProblem prob = build_detectable_problem(plant, dec, verts, mu, eps,
                                               opts.delta, with_J);
    SdpResult r = solve_feasibility(prob, opts.sdp);
    SolveAttempt attempt{mu, std::numeric_limits<double>::quiet_NaN(), r.message,
                         r.slack};
    if (r.status == SdpStatus::Feasible) {
      Candidate cand;
      cand.mu = mu;
      cand.cert.mode = CertificateMode::Detectable;
      cand.cert.mu = mu;
      cand.cert.kappa = prob.layout.scalar_value("kappa", r.x);
      cand.cert.P = prob.layout.diagonal_value("P", r.x);
      cand.cert.Q = prob.layout.symmetric_value("Q", r.x);
      cand.cert.X = prob.layout.rectangular_value("X", r.x);
      cand.cert.J = with_J ? prob.layout.rectangular_value("J", r.x)
                           : Matrix::Zero(plant.nchi(), plant.ny2());
      cand.cert.epsilon = eps;
      cand.cert.design_slack = -r.slack;
      cand.cert.vertex_grid_points = opts.lambda_grid_points;
      cand.cert.verify_points = opts.verify_points;

      Eigen::LLT<Matrix> qllt(cand.cert.Q);
      if (qllt.info() != Eigen::Success)
        throw NumericFault("solve_detectable: solver returned a non-PD Q");
      Matrix K1 = qllt.solve(cand.cert.X);
      Matrix L = with_J ? Matrix(qllt.solve(cand.cert.J))
                        : Matrix::Zero(plant.nchi(), plant.ny2());
      cand.gains = compute_gains(plant, K1, L);
      cand.verification =
          verify_certificate(plant, cand.gains, cand.cert, opts.verify_points, 0.0);
      cand.cert.verified_margin = cand.verification.margin;
      cand.valid = cand.verification.pass;
      if (!cand.valid) attempt.status += "; failed independent sweep";
      if (cand.valid && (!best.valid || (opts.best_margin &&
                                         cand.verification.margin >
                                             best.verification.margin)))
        best = cand;
      out.attempts.push_back(attempt);
      if (best.valid && !opts.best_margin) break;
      continue;
    }
    out.attempts.push_back(attempt);
  }

  if (best.valid) {
    out.feasible = true;
    out.certificate = best.cert;
    out.gains = best.gains;
    out.verification = best.verification;
    out.message = "feasible at mu=" + std::to_string(best.mu);
  } else {
    out.message = "no feasible mu in the search grid";
  }
  return out;
}

SynthesisResult solve_nondetectable(const PlantSpec& plant, const SynthesisOptions& opts) {
  plant.validate();
  SynthesisResult out;
  DecoupledData dec = make_decoupled_data(plant);

  const double eps = auto_epsilon(plant, opts);
  out.epsilon = eps;
  const bool with_J = !opts.force_L_zero && plant.ny2() > 0;
  DiagBounds speed_bounds = diag_bounds(plant.Lambda, {}, opts.lambda_grid_points);
  VertexSet speed_verts = build_vertex_set(speed_bounds);

  Candidate best;
  for (double mu : opts.mu_grid) {
    DiagBounds weighted_bounds = diag_bounds(
        plant.Lambda, [mu](double z) { return std::exp(mu * z); },
        opts.lambda_grid_points);
    VertexSet weighted_verts = build_vertex_set(weighted_bounds);
    for (double theta : opts.theta_grid) {
      LmiProblem prob =
          build_nondetectable_problem(plant, dec, speed_verts, weighted_verts, mu,
                                      theta, eps, opts.delta, with_J);
      SdpResult r = solve_feasibility(prob, opts.sdp);
      SolveAttempt attempt{mu, theta, r.message, r.slack};
      if (r.status == SdpStatus::Feasible) {
        Candidate cand;
        cand.mu = mu;
        cand.theta = theta;
        cand.cert.mode = CertificateMode::Nondetectable;
        cand.cert.mu = mu;
        cand.cert.theta = theta;
        cand.cert.kappa = prob.layout.scalar_value("kappa", r.x);
        cand.cert.P = prob.layout.diagonal_value("P", r.x);
        cand.cert.Q = prob.layout.symmetric_value("Q", r.x);
        cand.cert.Y = prob.layout.rectangular_value("Y", r.x);
        cand.cert.J = with_J ? prob.layout.rectangular_value("J", r.x)
                             : Matrix::Zero(plant.nchi(), plant.ny2());
        cand.cert.epsilon = eps;
        cand.cert.design_slack = -r.slack;
        cand.cert.vertex_grid_points = opts.lambda_grid_points;
        cand.cert.verify_points = opts.verify_points;

        Eigen::LLT<Matrix> qllt(cand.cert.Q);
        if (qllt.info() != Eigen::Success)
          throw NumericFault("solve_nondetectable: solver returned a non-PD Q");
        Matrix L = with_J ? Matrix(qllt.solve(cand.cert.J))
                          : Matrix::Zero(plant.nchi(), plant.ny2());
        cand.gains = compute_gains(plant, Matrix::Zero(plant.nchi(), plant.ny1()), L);
        cand.verification =
            verify_certificate(plant, cand.gains, cand.cert, opts.verify_points, 0.0);
        cand.cert.verified_margin = cand.verification.margin;
        cand.valid = cand.verification.pass;
        if (!cand.valid) attempt.status += "; failed independent sweep";
        if (cand.valid && (!best.valid || (opts.best_margin &&
                                           cand.verification.margin >
                                               best.verification.margin)))
          best = cand;
        out.attempts.push_back(attempt);
        if (best.valid && !opts.best_margin) break;
        continue;
      }
      out.attempts.push_back(attempt);
    }
    if (best.valid && !opts.best_margin) break;
  }

  if (best.valid) {
    out.feasible = true;
    out.certificate = best.cert;
    out.gains = best.gains;
    out.verification = best.verification;
    out.message = "feasible at mu=" + std::to_string(best.mu) +
                  ", theta=" + std::to_string(best.theta);
  } else {
    out.message = "no feasible (mu, theta) in the search grid";
  }
  return out;
}

}  // namespace uio
