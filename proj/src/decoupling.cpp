#include "uio/decoupling.hpp"

#include <algorithm>
#include <cstdio>

#include "uio/errors.hpp"

namespace uio {

bool check_input_decoupling_rank(const PlantSpec& plant) {
  if (plant.nw() == 0) return true;  // nothing to decouple
  Matrix cme = plant.C * plant.M * plant.E;
  return numerical_rank(cme) == plant.nw();
}

Matrix compute_H(const PlantSpec& plant) {
  const int n_chi = plant.nchi(), n_y1 = plant.ny1();
  if (plant.nw() == 0) return Matrix::Zero(n_chi, n_y1);
  if (!check_input_decoupling_rank(plant))
    throw ValidationError(
        "input decoupling rank condition violated: C*M*E must have full column "
        "rank for the unknown input to be removable from the estimator");
  Matrix cme = plant.C * plant.M * plant.E;
  // H = E (cme^T cme)^{-1} cme^T, the Moore-Penrose construction
  Matrix gram = cme.transpose() * cme;
  return plant.E * gram.ldlt().solve(cme.transpose());
}

DecoupledData make_decoupled_data(const PlantSpec& plant) {
  DecoupledData d;
  d.H = compute_H(plant);
  d.CM = plant.C * plant.M;
  d.R = Matrix::Identity(plant.nchi(), plant.nchi()) - d.H * d.CM;
  d.RA = d.R * plant.A;
  return d;
}

ObserverGains compute_gains(const PlantSpec& plant, const Matrix& K1, const Matrix& L) {
  const int n_chi = plant.nchi();
  if (K1.rows() != n_chi || K1.cols() != plant.ny1())
    throw ValidationError("compute_gains: K1 must be n_chi x n_y1");
  if (L.rows() != n_chi || L.cols() != plant.ny2())
    throw ValidationError("compute_gains: L must be n_chi x n_y2");

  DecoupledData d = make_decoupled_data(plant);
  ObserverGains g;
  g.H = d.H;
  g.R = d.R;
  g.K1 = K1;
  g.L = L;
  g.F = d.RA - K1 * d.CM;
  g.K2 = g.F * g.H;
  g.K = g.K1 + g.K2;

  ResidualMatrices res = residual_matrices(plant, g);
  // the residual floor inherits the conditioning of the C M E left inverse
  double cond = 1.0;
  if (plant.nw() > 0) {
    Eigen::JacobiSVD<Matrix> svd(plant.C * plant.M * plant.E);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 0.0) cond = sv(0) / sv(sv.size() - 1);
  }
  const double tol =
      1e-12 * (1.0 + plant.coefficient_scale()) * (1.0 + cond * cond);
  Matrix gchi_expected = g.F - g.F * g.H * d.CM;
  if (max_abs(res.Gu) > tol || max_abs(res.Gw) > tol ||
      max_abs(res.Gchi - gchi_expected) > tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " (|Gu|=%.3g, |Gw|=%.3g, tol=%.3g)",
                  max_abs(res.Gu), max_abs(res.Gw), tol);
    throw NumericFault(std::string("compute_gains: decoupling residual audit failed") +
                       buf);
  }
  return g;
}

ResidualMatrices residual_matrices(const PlantSpec& plant, const ObserverGains& gains) {
  const Matrix I = Matrix::Identity(plant.nchi(), plant.nchi());
  const Matrix hcm = gains.H * plant.C * plant.M;
  ResidualMatrices r;
  r.Gu = (I - gains.R - hcm) * plant.B;
  r.Gw = (I - hcm) * plant.E;
  r.Gchi = plant.A - hcm * plant.A - gains.K * plant.C * plant.M;
  return r;
}

PbhResult pbh_detectability(const Matrix& F0, const Matrix& Cobs, double tol_stability) {
  if (F0.rows() != F0.cols())
    throw ValidationError("pbh_detectability: F0 must be square");
  if (Cobs.cols() != F0.cols())
    throw ValidationError("pbh_detectability: Cobs column count must match F0");
  const int n = static_cast<int>(F0.rows());

  PbhResult result;
  result.detectable = true;
  for (const std::complex<double>& lambda : eigenvalues(F0)) {
    if (lambda.real() < -tol_stability) continue;  // already certified decaying
    Eigen::MatrixXcd stacked(n + Cobs.rows(), n);
    stacked.topRows(n) =
        F0.cast<std::complex<double>>() -
        lambda * Eigen::MatrixXcd::Identity(n, n);
    stacked.bottomRows(Cobs.rows()) = Cobs.cast<std::complex<double>>();
    if (numerical_rank(stacked) < n) {
      result.detectable = false;
      result.offending.push_back(lambda);
    }
  }
  return result;
}

}  // namespace uio
