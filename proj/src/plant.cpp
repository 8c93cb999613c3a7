#include "uio/plant.hpp"

#include <algorithm>
#include <cmath>

#include "uio/errors.hpp"

namespace uio {

LambdaField LambdaField::from_function(int size, std::function<Vector(double)> fn,
                                       std::string label) {
  if (size <= 0) throw ValidationError("LambdaField: size must be positive");
  LambdaField f;
  f.size_ = size;
  f.fn_ = std::move(fn);
  f.label_ = std::move(label);
  Vector probe = f.fn_(0.0);
  if (probe.size() != size)
    throw ValidationError("LambdaField: evaluator returned " +
                          std::to_string(probe.size()) + " entries, expected " +
                          std::to_string(size));
  return f;
}

LambdaField LambdaField::from_constant(Vector diag) {
  if (diag.size() == 0) throw ValidationError("LambdaField: empty diagonal");
  LambdaField f;
  f.size_ = static_cast<int>(diag.size());
  f.label_ = "constant";
  Vector d = std::move(diag);
  f.fn_ = [d](double) { return d; };
  return f;
}

LambdaField LambdaField::from_samples(Vector z, Matrix samples) {
  if (z.size() < 101)
    throw ValidationError("LambdaField: sampled tables need at least 101 points, got " +
                          std::to_string(z.size()));
  if (samples.rows() != z.size())
    throw ValidationError("LambdaField: sample rows must match z grid length");
  if (samples.cols() == 0) throw ValidationError("LambdaField: empty sample columns");
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i)
    if (!(z(i) < z(i + 1)))
      throw ValidationError("LambdaField: sample grid must be strictly increasing");
  if (z(0) > 0.0 || z(z.size() - 1) < 1.0)
    throw ValidationError("LambdaField: sample grid must cover [0, 1]");
  LambdaField f;
  f.size_ = static_cast<int>(samples.cols());
  f.sample_z_ = std::move(z);
  f.sample_values_ = std::move(samples);
  f.label_ = "sampled";
  return f;
}

Vector LambdaField::diag_at(double z) const {
  if (size_ == 0) throw ValidationError("LambdaField: empty field");
  if (fn_) return fn_(z);
  const Vector& zs = sample_z_;
  double zc = std::clamp(z, zs(0), zs(zs.size() - 1));
  // binary search for the bracketing interval
  Eigen::Index lo = 0, hi = zs.size() - 1;
  while (hi - lo > 1) {
    Eigen::Index mid = (lo + hi) / 2;
    if (zs(mid) <= zc) lo = mid;
    else hi = mid;
  }
  double t = (zc - zs(lo)) / (zs(hi) - zs(lo));
  return (1.0 - t) * sample_values_.row(lo).transpose() +
         t * sample_values_.row(hi).transpose();
}

double LambdaField::max_entry(int grid_points) const {
  double m = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    double z = static_cast<double>(i) / (grid_points - 1);
    m = std::max(m, diag_at(z).maxCoeff());
  }
  return m;
}

void SectorBound::validate() const {
  if (U1.rows() != U1.cols() || U2.rows() != U2.cols() || U1.rows() != U2.rows())
    throw ValidationError("SectorBound: U1 and U2 must be square with equal sizes");
  if (U1.rows() == 0) throw ValidationError("SectorBound: empty matrices");
  if (max_abs(U1 - U1.transpose()) > 1e-12 || max_abs(U2 - U2.transpose()) > 1e-12)
    throw ValidationError("SectorBound: U1 and U2 must be symmetric");
  if (sym_eig_min(symmetrize(U1)) < -1e-12)
    throw ValidationError("SectorBound: U1 must be positive semidefinite");
  if (sym_eig_min(symmetrize(U2 - U1)) <= 0.0)
    throw ValidationError("SectorBound: U2 - U1 must be positive definite");
}

NonlinearitySpec make_tanh_nonlinearity(const Matrix& U1, const Matrix& U2) {
  NonlinearitySpec spec;
  spec.name = "tanh";
  spec.f = [](const Vector& y) { return y.array().tanh().matrix(); };
  spec.bound = SectorBound{U1, U2};
  spec.bound.validate();
  return spec;
}

NonlinearitySpec make_zero_nonlinearity(int dim) {
  NonlinearitySpec spec;
  spec.name = "zero";
  spec.f = [dim](const Vector&) { return Vector::Zero(dim); };
  // any valid bound contains the zero map; use [0, I/2]
  spec.bound = SectorBound{Matrix::Zero(dim, dim),
                           0.5 * Matrix::Identity(dim, dim)};
  return spec;
}

NonlinearitySpec make_custom_nonlinearity(std::string name,
                                          std::function<Vector(const Vector&)> f,
                                          SectorBound bound) {
  bound.validate();
  NonlinearitySpec spec;
  spec.name = std::move(name);
  spec.f = std::move(f);
  spec.bound = std::move(bound);
  return spec;
}

void PlantSpec::validate(int lambda_grid_points) const {
  const int n_x = nx(), n_chi = nchi(), n_t = nt();
  auto expect = [](const Matrix& m, int r, int c, const std::string& name) {
    if (m.rows() != r || m.cols() != c)
      throw ValidationError("PlantSpec: " + name + " must be " + std::to_string(r) +
                            "x" + std::to_string(c) + ", got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  };
  if (n_x <= 0) throw ValidationError("PlantSpec: M must have at least one row");
  if (n_chi <= 0) throw ValidationError("PlantSpec: A must be nonempty");
  expect(A, n_chi, n_chi, "A");
  expect(M, n_x, n_chi, "M");
  expect(B, n_chi, nu(), "B");
  expect(E, n_chi, nw(), "E");
  expect(C, ny1(), n_x, "C");
  expect(N, ny2(), n_x, "N");
  expect(S, n_x, n_t, "S");
  expect(T, n_t, n_x, "T");
  if (ny1() <= 0) throw ValidationError("PlantSpec: C must have at least one row");
  if (Lambda.size() != n_x)
    throw ValidationError("PlantSpec: Lambda has " + std::to_string(Lambda.size()) +
                          " entries, expected " + std::to_string(n_x));
  if (nonlinearity.bound.dim() != n_t)
    throw ValidationError("PlantSpec: sector bound dimension must match rows of T");
  nonlinearity.bound.validate();
  if (!nonlinearity.f) throw ValidationError("PlantSpec: nonlinearity evaluator missing");
  for (int i = 0; i < lambda_grid_points; ++i) {
    double z = static_cast<double>(i) / (lambda_grid_points - 1);
    Vector d = Lambda.diag_at(z);
    if (d.minCoeff() <= 0.0)
      throw ValidationError("PlantSpec: Lambda must be strictly positive; entry <= 0 at z=" +
                            std::to_string(z));
  }
}

double PlantSpec::coefficient_scale() const {
  double m = 0.0;
  for (const Matrix* mat : {&M, &A, &B, &E, &C, &N, &S, &T,
                            &nonlinearity.bound.U1, &nonlinearity.bound.U2})
    m = std::max(m, max_abs(*mat));
  m = std::max(m, Lambda.max_entry(101));
  return m;
}

}  // namespace uio
