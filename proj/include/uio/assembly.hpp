#pragma once

#include "uio/linalg.hpp"
#include "uio/plant.hpp"

namespace uio {

/// Transport/sector block of the detectable-mode conditions, evaluated at a
/// diagonal surrogate D for the inverse transport speeds. Layout
/// [field | nonlinearity]:
///
///   [ -mu*P - kappa*T' He(U1 U2) T     -D P S + kappa*T'(U1+U2) ]
///   [            *                              -kappa*I        ]
///
/// D and P are diagonals passed as vectors. Substituting D = 1/Lambda(z)
/// recovers the z-dependent analysis condition.
Matrix assemble_Q_matrix(const Vector& D, const Vector& P, double kappa, double mu,
                         const PlantSpec& plant);

/// Boundary/ODE block of the detectable-mode conditions, analysis form
/// (gains realized). Layout [field at z=1 | ODE error]:
///
///   [ -exp(-mu)*P        -N' L' Q        ]
///   [      *       He(Q F) + M' P M      ]
Matrix assemble_F_block(const Vector& P, const Matrix& Q, const Matrix& F,
                        const Matrix& L, double mu, const PlantSpec& plant);

/// Same block in design form, linear in the substituted variables X = Q K1
/// and J = Q L (so the search stays convex):
///
///   [ -exp(-mu)*P              -N' J'                 ]
///   [      *       He(Q RA - X CM) + M' P M           ]
Matrix assemble_F_block_design(const Vector& P, const Matrix& Q, const Matrix& X,
                               const Matrix& J, double mu, const PlantSpec& plant,
                               const Matrix& RA, const Matrix& CM);

/// Core block of the non-detectable-mode design conditions at frequency-like
/// weight omega and inverse-speed surrogate D. Layout
/// [field | field at z=1 | ODE error | nonlinearity]. F is the fixed observer
/// matrix (R A, since K1 = 0 in this mode), J = Q L.
Matrix assemble_Xi(double omega, const Vector& D, const Vector& P, const Matrix& Q,
                   const Matrix& Y, const Matrix& J, double kappa, double mu,
                   const PlantSpec& plant, const Matrix& F);

/// Vertex-ready outer matrix of the non-detectable design: Xi bordered by the
/// Young-bounded cross terms, with scalar weight theta:
///
///   [ Xi         Theta(D)    theta*Z' J' ]
///   [  *          -theta*Q        0      ]
///   [  *             *         -theta*Q  ]
///
/// Theta(D) carries -D Y' in the first block row; Z' J' carries N' J' in the
/// second block row.
Matrix assemble_big_lmi_nondetectable(double omega, const Vector& D, const Vector& P,
                                      const Matrix& Q, const Matrix& Y, const Matrix& J,
                                      double kappa, double theta, double mu,
                                      const PlantSpec& plant, const Matrix& F);

/// Positivity block for the cross-weighted Lyapunov functional at a weighted
/// inverse-speed surrogate Dhat (vertices of exp(mu z)/Lambda_ii(z)):
///
///   [ Dhat*P    Dhat*Y' ]
///   [   *          Q    ]
Matrix assemble_Pi_positivity(const Vector& Dhat, const Vector& P, const Matrix& Q,
                              const Matrix& Y);

/// z-resolved positivity matrix of the cross-weighted functional.
Matrix assemble_Pi_z(double z, const Vector& P, const Matrix& Q, const Matrix& Y,
                     double mu, const LambdaField& Lambda);

/// z-resolved decrease condition of the non-detectable mode, gains realized
/// (L explicit). Same layout as assemble_Xi plus the (1,2) coupling block
/// that the design form bounds away.
Matrix assemble_Phi_z(double z, const Vector& P, const Matrix& Q, const Matrix& Y,
                      const Matrix& L, double kappa, double mu,
                      const PlantSpec& plant, const Matrix& F);

}  // namespace uio
