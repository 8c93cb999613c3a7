#include "uio/assembly.hpp"

#include <cmath>

#include "uio/errors.hpp"

namespace uio {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw ValidationError(std::string("assembly: ") + what);
}

}  // namespace

Matrix assemble_Q_matrix(const Vector& D, const Vector& P, double kappa, double mu,
                         const PlantSpec& plant) {
  const int n_x = plant.nx(), n_t = plant.nt();
  require(D.size() == n_x && P.size() == n_x, "D and P must have n_x entries");
  const Matrix& T = plant.T;
  const Matrix& U1 = plant.nonlinearity.bound.U1;
  const Matrix& U2 = plant.nonlinearity.bound.U2;

  Matrix m(n_x + n_t, n_x + n_t);
  m.setZero();
  m.topLeftCorner(n_x, n_x) =
      Matrix((-mu * P).asDiagonal()) - kappa * T.transpose() * he(U1 * U2) * T;
  m.topRightCorner(n_x, n_t) =
      -(D.asDiagonal() * (P.asDiagonal() * plant.S)) +
      kappa * T.transpose() * (U1 + U2);
  m.bottomLeftCorner(n_t, n_x) = m.topRightCorner(n_x, n_t).transpose();
  m.bottomRightCorner(n_t, n_t) = -kappa * Matrix::Identity(n_t, n_t);
  return m;
}

Matrix assemble_F_block(const Vector& P, const Matrix& Q, const Matrix& F,
                        const Matrix& L, double mu, const PlantSpec& plant) {
  const int n_x = plant.nx(), n_chi = plant.nchi();
  require(P.size() == n_x, "P must have n_x entries");
  require(Q.rows() == n_chi && Q.cols() == n_chi, "Q must be n_chi x n_chi");
  require(F.rows() == n_chi && F.cols() == n_chi, "F must be n_chi x n_chi");
  require(L.rows() == n_chi && L.cols() == plant.ny2(), "L must be n_chi x n_y2");

  Matrix m(n_x + n_chi, n_x + n_chi);
  m.setZero();
  m.topLeftCorner(n_x, n_x) = Matrix((-std::exp(-mu) * P).asDiagonal());
  m.topRightCorner(n_x, n_chi) = -plant.N.transpose() * L.transpose() * Q;
  m.bottomLeftCorner(n_chi, n_x) = m.topRightCorner(n_x, n_chi).transpose();
  m.bottomRightCorner(n_chi, n_chi) =
      he(Q * F) + plant.M.transpose() * P.asDiagonal() * plant.M;
  return m;
}

Matrix assemble_F_block_design(const Vector& P, const Matrix& Q, const Matrix& X,
                               const Matrix& J, double mu, const PlantSpec& plant,
                               const Matrix& RA, const Matrix& CM) {
  const int n_x = plant.nx(), n_chi = plant.nchi();
  require(P.size() == n_x, "P must have n_x entries");
  require(Q.rows() == n_chi && Q.cols() == n_chi, "Q must be n_chi x n_chi");
  require(X.rows() == n_chi && X.cols() == plant.ny1(), "X must be n_chi x n_y1");
  require(J.rows() == n_chi && J.cols() == plant.ny2(), "J must be n_chi x n_y2");

  Matrix m(n_x + n_chi, n_x + n_chi);
  m.setZero();
  m.topLeftCorner(n_x, n_x) = Matrix((-std::exp(-mu) * P).asDiagonal());
  m.topRightCorner(n_x, n_chi) = -plant.N.transpose() * J.transpose();
  m.bottomLeftCorner(n_chi, n_x) = m.topRightCorner(n_x, n_chi).transpose();
  m.bottomRightCorner(n_chi, n_chi) =
      he(Q * RA - X * CM) + plant.M.transpose() * P.asDiagonal() * plant.M;
  return m;
}

namespace {

// Shared builder for the [field | field@1 | ODE | nonlinearity] decrease
// matrix. The design form zeroes the (1,2) coupling and swaps N'L'Q for N'J';
// the analysis form keeps L explicit.
Matrix decrease_matrix(double omega, const Vector& D, const Vector& P, const Matrix& Q,
                       const Matrix& Y, const Matrix& boundary_coupling,
                       const Matrix* coupling_12, double kappa, double mu,
                       const PlantSpec& plant, const Matrix& F) {
  const int n_x = plant.nx(), n_chi = plant.nchi(), n_t = plant.nt();
  const Matrix& T = plant.T;
  const Matrix& U1 = plant.nonlinearity.bound.U1;
  const Matrix& U2 = plant.nonlinearity.bound.U2;

  const int total = 2 * n_x + n_chi + n_t;
  Matrix m(total, total);
  m.setZero();
  const int o1 = 0, o2 = n_x, o3 = 2 * n_x, o4 = 2 * n_x + n_chi;

  m.block(o1, o1, n_x, n_x) =
      Matrix((-mu * omega * P).asDiagonal()) -
      kappa * T.transpose() * he(U1 * U2) * T;
  if (coupling_12) m.block(o1, o2, n_x, n_x) = *coupling_12;
  m.block(o1, o3, n_x, n_chi) = D.asDiagonal() * Y.transpose() * F;
  m.block(o1, o4, n_x, n_t) =
      kappa * T.transpose() * (U1 + U2) -
      omega * (D.asDiagonal() * (P.asDiagonal() * plant.S));
  m.block(o2, o2, n_x, n_x) = Matrix((-omega * P).asDiagonal());
  m.block(o2, o3, n_x, n_chi) = -Y.transpose() + boundary_coupling;
  m.block(o3, o3, n_chi, n_chi) =
      he(Q * F + Y * plant.M) + plant.M.transpose() * P.asDiagonal() * plant.M;
  m.block(o3, o4, n_chi, n_t) = -Y * (D.asDiagonal() * plant.S);
  m.block(o4, o4, n_t, n_t) = -kappa * Matrix::Identity(n_t, n_t);

  // mirror the upper blocks
  m.block(o2, o1, n_x, n_x) = m.block(o1, o2, n_x, n_x).transpose();
  m.block(o3, o1, n_chi, n_x) = m.block(o1, o3, n_x, n_chi).transpose();
  m.block(o4, o1, n_t, n_x) = m.block(o1, o4, n_x, n_t).transpose();
  m.block(o3, o2, n_chi, n_x) = m.block(o2, o3, n_x, n_chi).transpose();
  m.block(o4, o3, n_t, n_chi) = m.block(o3, o4, n_chi, n_t).transpose();
  return m;
}

}  // namespace

Matrix assemble_Xi(double omega, const Vector& D, const Vector& P, const Matrix& Q,
                   const Matrix& Y, const Matrix& J, double kappa, double mu,
                   const PlantSpec& plant, const Matrix& F) {
  const int n_x = plant.nx(), n_chi = plant.nchi();
  require(D.size() == n_x && P.size() == n_x, "D and P must have n_x entries");
  require(Y.rows() == n_chi && Y.cols() == n_x, "Y must be n_chi x n_x");
  require(J.rows() == n_chi && J.cols() == plant.ny2(), "J must be n_chi x n_y2");
  Matrix boundary = -plant.N.transpose() * J.transpose();
  return decrease_matrix(omega, D, P, Q, Y, boundary, nullptr, kappa, mu, plant, F);
}

Matrix assemble_big_lmi_nondetectable(double omega, const Vector& D, const Vector& P,
                                      const Matrix& Q, const Matrix& Y, const Matrix& J,
                                      double kappa, double theta, double mu,
                                      const PlantSpec& plant, const Matrix& F) {
  const int n_x = plant.nx(), n_chi = plant.nchi(), n_t = plant.nt();
  const int n_xi = 2 * n_x + n_chi + n_t;
  Matrix xi = assemble_Xi(omega, D, P, Q, Y, J, kappa, mu, plant, F);

  Matrix m(n_xi + 2 * n_chi, n_xi + 2 * n_chi);
  m.setZero();
  m.topLeftCorner(n_xi, n_xi) = xi;
  // -D Y' against the field slot
  m.block(0, n_xi, n_x, n_chi) = -(D.asDiagonal() * Y.transpose());
  // theta N' J' against the boundary-trace slot
  m.block(n_x, n_xi + n_chi, n_x, n_chi) =
      theta * plant.N.transpose() * J.transpose();
  m.block(n_xi, n_xi, n_chi, n_chi) = -theta * Q;
  m.block(n_xi + n_chi, n_xi + n_chi, n_chi, n_chi) = -theta * Q;
  m.block(n_xi, 0, n_chi, n_x) = m.block(0, n_xi, n_x, n_chi).transpose();
  m.block(n_xi + n_chi, n_x, n_chi, n_x) =
      m.block(n_x, n_xi + n_chi, n_x, n_chi).transpose();
  return m;
}

Matrix assemble_Pi_positivity(const Vector& Dhat, const Vector& P, const Matrix& Q,
                              const Matrix& Y) {
  const int n_x = static_cast<int>(P.size());
  const int n_chi = static_cast<int>(Q.rows());
  require(Dhat.size() == n_x, "Dhat must have n_x entries");
  require(Y.rows() == n_chi && Y.cols() == n_x, "Y must be n_chi x n_x");

  Matrix m(n_x + n_chi, n_x + n_chi);
  m.setZero();
  m.topLeftCorner(n_x, n_x) = Matrix((Dhat.array() * P.array()).matrix().asDiagonal());
  m.topRightCorner(n_x, n_chi) = Dhat.asDiagonal() * Y.transpose();
  m.bottomLeftCorner(n_chi, n_x) = m.topRightCorner(n_x, n_chi).transpose();
  m.bottomRightCorner(n_chi, n_chi) = Q;
  return m;
}

Matrix assemble_Pi_z(double z, const Vector& P, const Matrix& Q, const Matrix& Y,
                     double mu, const LambdaField& Lambda) {
  Vector lam = Lambda.diag_at(z);
  Vector dinv = lam.cwiseInverse();
  const int n_x = static_cast<int>(P.size());
  const int n_chi = static_cast<int>(Q.rows());
  Matrix m(n_x + n_chi, n_x + n_chi);
  m.setZero();
  m.topLeftCorner(n_x, n_x) =
      Matrix((std::exp(-mu * z) * dinv.array() * P.array()).matrix().asDiagonal());
  m.topRightCorner(n_x, n_chi) = dinv.asDiagonal() * Y.transpose();
  m.bottomLeftCorner(n_chi, n_x) = m.topRightCorner(n_x, n_chi).transpose();
  m.bottomRightCorner(n_chi, n_chi) = Q;
  return m;
}

Matrix assemble_Phi_z(double z, const Vector& P, const Matrix& Q, const Matrix& Y,
                      const Matrix& L, double kappa, double mu,
                      const PlantSpec& plant, const Matrix& F) {
  Vector dinv = plant.Lambda.diag_at(z).cwiseInverse();
  const double omega = std::exp(-mu * z);
  Matrix boundary = -plant.N.transpose() * L.transpose() * Q;
  Matrix coupling =
      -(dinv.asDiagonal() * (Y.transpose() * (L * plant.N))).eval();
  return decrease_matrix(omega, dinv, P, Q, Y, boundary, &coupling, kappa, mu,
                         plant, F);
}

}  // namespace uio
