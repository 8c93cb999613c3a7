#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace uio {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A + A^T.
Matrix he(const Matrix& a);

/// (A + A^T)/2, for scrubbing rounding asymmetry off nominally symmetric results.
Matrix symmetrize(const Matrix& a);

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& a);

/// Extremal eigenvalues of a symmetric matrix.
double sym_eig_max(const Matrix& s);
double sym_eig_min(const Matrix& s);

/// SVD rank with threshold max(rows, cols) * eps * sigma_max.
int numerical_rank(const Matrix& m);
int numerical_rank(const Eigen::MatrixXcd& m);

/// Cholesky test for s - shift*I > 0.
bool is_positive_definite(const Matrix& s, double shift = 0.0);

/// Eigenvalues of a general square matrix, sorted by (real, imag).
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

}  // namespace uio
