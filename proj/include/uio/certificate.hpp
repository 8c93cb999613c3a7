#pragma once

#include <string>

#include "uio/linalg.hpp"

namespace uio {

enum class CertificateMode {
  Detectable,     // diagonal-weight functional, free K1 and L
  Nondetectable,  // cross-weighted functional, K1 = 0, F = R A
};

std::string to_string(CertificateMode mode);

/// Everything needed to re-check exponential decay of the estimation error
/// independently of the solver that produced it.
struct StabilityCertificate {
  CertificateMode mode = CertificateMode::Detectable;
  double mu = 0.0;     // spatial decay weight
  double kappa = 0.0;  // sector multiplier
  double theta = 0.0;  // cross-term weight (non-detectable mode only)
  Vector P;            // diagonal field weight
  Matrix Q;            // ODE-error weight
  Matrix X;            // Q * K1 (detectable mode)
  Matrix J;            // Q * L
  Matrix Y;            // field/ODE cross weight (non-detectable mode)

  double epsilon = 0.0;          // strictness shift used during design
  double design_slack = 0.0;     // solver margin beyond epsilon
  double verified_margin = 0.0;  // margin from the independent sweep
  int vertex_grid_points = 0;    // sampling resolution behind the interval bounds
  int verify_points = 0;         // sweep resolution

  /// Structural invariants: P > 0 entrywise, Q symmetric positive definite,
  /// mu > 0, kappa > 0 (and theta > 0 in non-detectable mode).
  /// Throws ValidationError with the violated condition.
  void validate() const;
};

}  // namespace uio
