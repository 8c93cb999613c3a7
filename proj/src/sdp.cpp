#include "uio/sdp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "uio/errors.hpp"

namespace uio {

namespace {

struct BlockState {
  Eigen::LLT<Matrix> llt;
  Matrix inverse;
  double logdet = 0.0;
};

// Returns false when the block fails to be positive definite.
bool factor_block(const LmiConstraint& c, const Vector& x, double s, BlockState& out,
                  bool need_inverse) {
  Matrix m = c.f0;
  for (const auto& [idx, coeff] : c.coeffs) m += x(idx) * coeff;
  m.diagonal().array() += s;
  if (!m.allFinite()) return false;
  out.llt.compute(m);
  if (out.llt.info() != Eigen::Success) return false;
  double ld = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double d = out.llt.matrixLLT()(i, i);
    if (!(d > 0.0)) return false;
    ld += std::log(d);
  }
  out.logdet = 2.0 * ld;
  if (need_inverse)
    out.inverse = out.llt.solve(Matrix::Identity(m.rows(), m.rows()));
  return true;
}

}  // namespace

SdpResult solve_feasibility(const LmiProblem& problem, const SdpOptions& opt) {
  const int n = problem.layout.total();
  const int K = static_cast<int>(problem.constraints.size());
  const double R = opt.box_radius;

  SdpResult result;
  if (K == 0) {
    result.status = SdpStatus::Feasible;
    result.x = Vector::Zero(n);
    result.slack = -std::numeric_limits<double>::infinity();
    result.message = "no constraints";
    return result;
  }

  // barrier complexity: block sizes plus two 1x1 box terms per variable
  double nu = 2.0 * n;
  for (const LmiConstraint& c : problem.constraints) nu += c.dim;

  Vector x = Vector::Zero(n);
  double s = 0.0;
  for (const LmiConstraint& c : problem.constraints)
    s = std::max(s, sym_eig_max((-c.f0).eval()));
  s += 1.0;

  std::vector<BlockState> blocks(K);

  auto phi = [&](const Vector& xv, double sv, double tau, bool& ok) {
    ok = false;
    double value = tau * sv;
    for (int i = 0; i < n; ++i) {
      if (!(std::abs(xv(i)) < R)) return 0.0;
      value -= std::log(R - xv(i)) + std::log(R + xv(i));
    }
    BlockState bs;
    for (int k = 0; k < K; ++k) {
      if (!factor_block(problem.constraints[k], xv, sv, bs, false)) return 0.0;
      value -= bs.logdet;
    }
    ok = std::isfinite(value);
    return value;
  };

  double best_s = s;
  Vector best_x = x;
  int total_newton = 0;
  std::string stall_note;

  for (double tau = opt.tau0; tau <= opt.tau_max; tau *= opt.tau_growth) {
    bool stage_converged = false;
    for (int it = 0; it < opt.max_newton_per_stage; ++it) {
      if (total_newton >= opt.max_newton_total) break;

      bool all_pd = true;
      for (int k = 0; k < K; ++k)
        all_pd = all_pd && factor_block(problem.constraints[k], x, s, blocks[k], true);
      if (!all_pd) {
        stall_note = "interior point lost positive definiteness";
        break;
      }

      // gradient and Hessian over (x, s)
      Vector grad = Vector::Zero(n + 1);
      Matrix hess = Matrix::Zero(n + 1, n + 1);
      grad(n) = tau;
      for (int i = 0; i < n; ++i) {
        grad(i) = 1.0 / (R - x(i)) - 1.0 / (R + x(i));
        hess(i, i) = 1.0 / ((R - x(i)) * (R - x(i))) + 1.0 / ((R + x(i)) * (R + x(i)));
      }
      for (int k = 0; k < K; ++k) {
        const LmiConstraint& c = problem.constraints[k];
        const Matrix& W = blocks[k].inverse;
        const int nc = static_cast<int>(c.coeffs.size());
        std::vector<Matrix> wf(nc);
        for (int a = 0; a < nc; ++a) wf[a] = W * c.coeffs[a].second;
        for (int a = 0; a < nc; ++a) {
          const int ia = c.coeffs[a].first;
          grad(ia) -= wf[a].trace();
          for (int b = a; b < nc; ++b) {
            const int ib = c.coeffs[b].first;
            double v = (wf[a].array() * wf[b].transpose().array()).sum();
            hess(ia, ib) += v;
            if (ib != ia) hess(ib, ia) += v;
          }
          double cross = (wf[a].array() * W.transpose().array()).sum();
          hess(ia, n) += cross;
          hess(n, ia) += cross;
        }
        grad(n) -= W.trace();
        hess(n, n) += (W.array() * W.transpose().array()).sum();
      }

      // Newton direction with ridge escalation on factorization failure
      Vector dir;
      double ridge = 0.0;
      for (;;) {
        Matrix h = hess;
        if (ridge > 0.0) h.diagonal().array() += ridge;
        Eigen::LDLT<Matrix> ldlt(h);
        dir = ldlt.solve(-grad);
        if (ldlt.info() == Eigen::Success && dir.allFinite() &&
            -grad.dot(dir) >= 0.0)
          break;
        ridge = ridge == 0.0 ? 1e-10 * (1.0 + hess.diagonal().maxCoeff()) : ridge * 100.0;
        if (ridge > 1e12) break;
      }
      if (!dir.allFinite()) {
        stall_note = "Newton direction not finite";
        break;
      }

      double decrement2 = -grad.dot(dir);
      if (decrement2 * 0.5 < opt.newton_tol) {
        stage_converged = true;
        break;
      }

      bool base_ok = false;
      double phi0 = phi(x, s, tau, base_ok);
      if (!base_ok) {
        stall_note = "barrier value not finite at the current iterate";
        break;
      }
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-14) {
        Vector xc = x + alpha * dir.head(n);
        double sc = s + alpha * dir(n);
        bool ok = false;
        double val = phi(xc, sc, tau, ok);
        if (ok && val <= phi0 + 0.25 * alpha * grad.dot(dir)) {
          x = xc;
          s = sc;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++total_newton;
      if (!accepted) {
        stall_note = "line search failed";
        break;
      }
      if (s < best_s) {
        best_s = s;
        best_x = x;
      }
      if (s <= -opt.desired_slack) {
        result.status = SdpStatus::Feasible;
        result.x = x;
        result.slack = s;
        result.newton_iterations = total_newton;
        result.message = "feasible, slack target met";
        return result;
      }
    }

    if (s <= -opt.desired_slack) break;
    if (stage_converged && s > 0.0) {
      // central-path bound: the true minimum slack is within ~nu/tau of a
      // centered iterate; 2x safety for approximate centering
      if (s - 2.0 * nu / tau > 0.0) {
        result.status = SdpStatus::Infeasible;
        result.x = best_x;
        result.slack = best_s;
        result.newton_iterations = total_newton;
        result.message = "infeasible at the requested strictness (slack lower bound " +
                         std::to_string(s - 2.0 * nu / tau) + ")";
        return result;
      }
    }
    if (!stall_note.empty()) break;
    if (total_newton >= opt.max_newton_total) {
      stall_note = "iteration budget exhausted";
      break;
    }
  }

  result.x = best_x;
  result.slack = best_s;
  result.newton_iterations = total_newton;
  if (best_s <= -opt.required_slack) {
    result.status = SdpStatus::Feasible;
    result.message = stall_note.empty()
                         ? "feasible (slack target not fully met)"
                         : "feasible (" + stall_note + ")";
  } else if (best_s > 0.0) {
    result.status = SdpStatus::Infeasible;
    result.message = stall_note.empty()
                         ? "no strictly feasible point found (best slack " +
                               std::to_string(best_s) + ")"
                         : "no strictly feasible point found (" + stall_note + ")";
  } else {
    result.status = SdpStatus::Stalled;
    result.message = "marginal: best slack " + std::to_string(best_s) +
                     (stall_note.empty() ? "" : " (" + stall_note + ")");
  }
  return result;
}

}  // namespace uio
