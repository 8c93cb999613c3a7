#pragma once

#include <string>
#include <vector>

#include "uio/assembly.hpp"
#include "uio/certificate.hpp"
#include "uio/decoupling.hpp"
#include "uio/plant.hpp"
#include "uio/sdp.hpp"
#include "uio/vertex.hpp"

namespace uio {

std::vector<double> default_mu_grid();  // 25 log-spaced points in [1e-3, 10]

struct SynthesisOptions {
  std::vector<double> mu_grid = default_mu_grid();
  std::vector<double> theta_grid = default_mu_grid();  // non-detectable mode only
  double epsilon = 0.0;  // <= 0 selects 1e-6 * (1 + coefficient scale)
  double delta = 1e-4;   // floors: Q >= delta I, kappa >= delta
  bool best_margin = false;   // false: first verified point wins; true: best margin
  bool force_L_zero = false;  // drop the outflow injection entirely
  int lambda_grid_points = 1001;
  int verify_points = 1001;
  SdpOptions sdp;
};

struct SolveAttempt {
  double mu = 0.0;
  double theta = 0.0;  // NaN in detectable mode
  std::string status;
  double slack = 0.0;
};

/// Outcome of the independent certificate sweep. The margin is the smallest
/// distance to the required side over every condition; pass means margin > tol.
struct VerificationReport {
  bool pass = false;
  double margin = 0.0;
  double tol = 0.0;
  int points = 0;
  struct ConditionSweep {
    std::string name;
    double margin = 0.0;   // condition-wise worst margin
    double worst_z = 0.0;  // -1 for z-independent conditions
    double first_violation_z = -1.0;  // -1 when the condition never fails
  };
  std::vector<ConditionSweep> conditions;
};

struct SynthesisResult {
  bool feasible = false;
  std::string message;
  double epsilon = 0.0;
  StabilityCertificate certificate;
  ObserverGains gains;
  VerificationReport verification;
  std::vector<SolveAttempt> attempts;
};

/// Design for a detectable decoupled pair: searches the mu grid, solving the
/// vertex-relaxed conditions with free injections K1 = Q^{-1} X, L = Q^{-1} J,
/// and accepts only solutions that pass the independent sweep.
/// Precondition failures (rank condition) throw ValidationError; a
/// non-detectable pair returns an infeasible result explaining the rejection.
SynthesisResult solve_detectable(const PlantSpec& plant, const SynthesisOptions& options = {});

/// Design without detectability: K1 = 0, observer matrix fixed at R A, and a
/// cross-weighted functional with free Y and L = Q^{-1} J. Searches the
/// (mu, theta) grid in deterministic row-major order.
SynthesisResult solve_nondetectable(const PlantSpec& plant, const SynthesisOptions& options = {});

/// Re-checks a certificate against the z-resolved conditions on a dense sweep,
/// independently of any solver output. Structural violations (tampered P, bad
/// shapes) throw ValidationError before any sweeping happens.
VerificationReport verify_certificate(const PlantSpec& plant, const ObserverGains& gains,
                                      const StabilityCertificate& cert,
                                      int points = 1001, double tol = 0.0);

}  // namespace uio
