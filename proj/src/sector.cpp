#include "uio/sector.hpp"

#include <cmath>

#include "uio/errors.hpp"

namespace uio {

Matrix build_sector_matrix(const SectorBound& bound) {
  bound.validate();
  const int n = bound.dim();
  Matrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = -he(bound.U1 * bound.U2);
  m.topRightCorner(n, n) = bound.U1 + bound.U2;
  m.bottomLeftCorner(n, n) = (bound.U1 + bound.U2).transpose();
  m.bottomRightCorner(n, n) = -Matrix::Identity(n, n);
  return m;
}

namespace {

double form_value(const Matrix& sector, const Vector& dy, const Vector& df) {
  const int n = static_cast<int>(dy.size());
  Vector v(2 * n);
  v.head(n) = dy;
  v.tail(n) = df;
  return v.dot(sector * v);
}

}  // namespace

SectorValidation validate_sector_bound(const NonlinearitySpec& spec,
                                       int samples_per_axis, double lo, double hi,
                                       double tol) {
  if (samples_per_axis < 2)
    throw ValidationError("validate_sector_bound: need at least 2 samples per axis");
  if (!(lo < hi)) throw ValidationError("validate_sector_bound: empty sample box");
  spec.bound.validate();
  if (!spec.f) throw ValidationError("validate_sector_bound: missing evaluator");

  const int n = spec.bound.dim();
  const Matrix sector = build_sector_matrix(spec.bound);

  SectorValidation result;
  result.min_value = std::numeric_limits<double>::infinity();
  auto probe = [&](const Vector& a, const Vector& b) {
    double v = form_value(sector, a - b, spec.f(a) - spec.f(b));
    if (v < result.min_value) {
      result.min_value = v;
      result.worst_a = a;
      result.worst_b = b;
    }
  };

  probe(Vector::Zero(n), Vector::Zero(n));

  auto grid = [&](int i) {
    return lo + (hi - lo) * static_cast<double>(i) / (samples_per_axis - 1);
  };
  if (n == 1) {
    for (int i = 0; i < samples_per_axis; ++i)
      for (int j = 0; j < samples_per_axis; ++j)
        probe(Vector::Constant(1, grid(i)), Vector::Constant(1, grid(j)));
  } else {
    // Full pair grids over R^n x R^n are intractable; probe each channel with
    // the rest held at zero, then the all-equal diagonal ray.
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < samples_per_axis; ++i)
        for (int j = 0; j < samples_per_axis; ++j) {
          Vector a = Vector::Zero(n), b = Vector::Zero(n);
          a(k) = grid(i);
          b(k) = grid(j);
          probe(a, b);
        }
    for (int i = 0; i < samples_per_axis; ++i)
      for (int j = 0; j < samples_per_axis; ++j)
        probe(Vector::Constant(n, grid(i)), Vector::Constant(n, grid(j)));
  }

  result.ok = result.min_value >= -tol;
  return result;
}

double lipschitz_constant(const SectorBound& bound) {
  bound.validate();
  const Matrix cross = he(bound.U1 * bound.U2);
  const Matrix sum = bound.U1 + bound.U2;
  // spectral norm; sum is symmetric positive definite under the validated bound
  const double sum_norm = std::sqrt(sym_eig_max((sum.transpose() * sum).eval()));
  const double cross_max = sym_eig_max(symmetrize(cross));
  const double digamma = 2.0 * std::max(1.0, cross_max / sum_norm);
  const double g1 = (1.0 - digamma) / digamma;
  const Matrix shifted = -cross + digamma * sum_norm * Matrix::Identity(cross.rows(), cross.cols());
  const double g2 = sym_eig_max(symmetrize(shifted));
  return g2 * std::abs(1.0 / g1);
}

Vector evaluate_rho(const NonlinearitySpec& spec, const Matrix& T,
                    const Vector& x, const Vector& eps_x) {
  if (T.cols() != x.size() || x.size() != eps_x.size())
    throw ValidationError("evaluate_rho: incompatible shapes");
  if (!spec.f) throw ValidationError("evaluate_rho: missing evaluator");
  return spec.f(T * x) - spec.f(T * (x - eps_x));
}

}  // namespace uio
