#pragma once

#include <complex>
#include <vector>

#include "uio/linalg.hpp"
#include "uio/plant.hpp"

namespace uio {

/// Full observer gain tuple. Everything is determined by (H, K1, L) and the
/// plant: R = I - H C M, F = R A - K1 C M, K2 = F H, K = K1 + K2.
struct ObserverGains {
  Matrix H;   // boundary-output feedthrough that removes the unknown input
  Matrix R;   // I - H C M
  Matrix F;   // observer ODE state matrix
  Matrix K1;  // free inflow-measurement injection
  Matrix K2;  // F H
  Matrix K;   // K1 + K2
  Matrix L;   // outflow-measurement injection
};

/// Derived quantities shared by the design conditions.
struct DecoupledData {
  Matrix H;
  Matrix R;   // I - H C M
  Matrix RA;  // R * A
  Matrix CM;  // C * M
};

/// True iff C M E has full column rank (SVD rank against
/// max(rows, cols) * eps * sigma_max).
bool check_input_decoupling_rank(const PlantSpec& plant);

/// Left-inverse-based feedthrough H = E ((CME)^T CME)^{-1} (CME)^T.
/// A plant without unknown inputs (E has zero columns) gets H = 0.
/// Throws ValidationError when the rank condition fails.
Matrix compute_H(const PlantSpec& plant);

DecoupledData make_decoupled_data(const PlantSpec& plant);

/// Builds the full gain tuple from the two free design gains and checks the
/// decoupling residuals vanish (numeric audit, max-norm <= 1e-12 * scale).
ObserverGains compute_gains(const PlantSpec& plant, const Matrix& K1, const Matrix& L);

struct ResidualMatrices {
  Matrix Gu;    // (I - R - H C M) B      : known-input mismatch
  Matrix Gw;    // (I - H C M) E          : unknown-input leakage
  Matrix Gchi;  // A - H C M A - K C M    : state-coupling residual
};

/// Residuals of the algebraic decoupling identities for an arbitrary gain
/// tuple (not necessarily one built by compute_gains).
ResidualMatrices residual_matrices(const PlantSpec& plant, const ObserverGains& gains);

struct PbhResult {
  bool detectable = false;
  // eigenvalues with real part >= -tol_stability that fail the rank test
  std::vector<std::complex<double>> offending;
};

/// Eigenvector rank test for detectability of the pair (F0, Cobs): every
/// eigenvalue with real part >= -tol_stability must keep [F0 - lambda I; Cobs]
/// at full column rank. Marginal eigenvalues inside the tolerance band count
/// as unstable and are tested.
PbhResult pbh_detectability(const Matrix& F0, const Matrix& Cobs,
                            double tol_stability = 1e-9);

}  // namespace uio
