#pragma once

#include "uio/linalg.hpp"
#include "uio/plant.hpp"

namespace uio {

/// Quadratic form matrix of the incremental sector inequality:
///
///   [dy; df]^T  [ -(U1 U2 + U2 U1)   U1 + U2 ]  [dy; df]  >=  0
///               [  (U1 + U2)^T         -I    ]
///
/// where dy is an input increment and df the matching output increment of f.
Matrix build_sector_matrix(const SectorBound& bound);

struct SectorValidation {
  bool ok = false;
  double min_value = 0.0;  // smallest sampled form value
  Vector worst_a, worst_b; // inputs attaining it
};

/// Samples input pairs on [lo, hi] (plus the 0/0 pair) and checks the sector
/// form stays >= -tol. One-dimensional nonlinearities get the full pair grid;
/// higher dimensions are probed per channel and along the diagonal ray.
SectorValidation validate_sector_bound(const NonlinearitySpec& spec,
                                       int samples_per_axis = 41,
                                       double lo = -5.0, double hi = 5.0,
                                       double tol = 1e-12);

/// Global Lipschitz constant implied by the sector bound.
double lipschitz_constant(const SectorBound& bound);

/// Increment of the nonlinear source between the true and shifted states:
/// rho = f(T x) - f(T (x - eps_x)).
Vector evaluate_rho(const NonlinearitySpec& spec, const Matrix& T,
                    const Vector& x, const Vector& eps_x);

}  // namespace uio
