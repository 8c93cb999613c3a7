#pragma once

#include <string>

#include "uio/lmi.hpp"

namespace uio {

/// Options for the phase-I barrier solver. The solver works on
///   minimize s   subject to   G_k(x) + s I >= 0,  |x_i| < box_radius,
/// so a returned s < 0 certifies every block of the original problem is
/// positive definite with margin at least |s|.
struct SdpOptions {
  double required_slack = 1e-9;  // declare feasibility once s <= -required_slack
  double desired_slack = 1e-2;   // keep centering until s <= -desired_slack
  double box_radius = 1e6;
  double tau0 = 1.0;
  double tau_growth = 20.0;
  double tau_max = 1e8;
  int max_newton_per_stage = 120;
  int max_newton_total = 4000;
  double newton_tol = 1e-10;  // half squared Newton decrement
};

enum class SdpStatus {
  Feasible,    // found x with slack s <= -required_slack
  Infeasible,  // barrier bound certifies no point meets the requested strictness
  Stalled,     // resolution exhausted without a verdict
};

struct SdpResult {
  SdpStatus status = SdpStatus::Stalled;
  Vector x;            // best point in layout coordinates
  double slack = 0.0;  // final s (negative = definiteness margin beyond shifts)
  int newton_iterations = 0;
  std::string message;
};

SdpResult solve_feasibility(const LmiProblem& problem, const SdpOptions& options = {});

}  // namespace uio
