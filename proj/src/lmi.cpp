#include "uio/lmi.hpp"

#include <random>

#include "uio/errors.hpp"

namespace uio {

int VariableLayout::add_diagonal(const std::string& name, int n) {
  entries_.push_back({name, Kind::Diagonal, n, n, total_, n});
  total_ += n;
  return entries_.back().offset;
}

int VariableLayout::add_symmetric(const std::string& name, int n) {
  entries_.push_back({name, Kind::Symmetric, n, n, total_, n * (n + 1) / 2});
  total_ += entries_.back().count;
  return entries_.back().offset;
}

int VariableLayout::add_rectangular(const std::string& name, int rows, int cols) {
  entries_.push_back({name, Kind::Rectangular, rows, cols, total_, rows * cols});
  total_ += rows * cols;
  return entries_.back().offset;
}

int VariableLayout::add_scalar(const std::string& name) {
  entries_.push_back({name, Kind::Scalar, 1, 1, total_, 1});
  total_ += 1;
  return entries_.back().offset;
}

const VariableLayout::Entry& VariableLayout::find(const std::string& name,
                                                  Kind kind) const {
  for (const Entry& e : entries_)
    if (e.name == name) {
      if (e.kind != kind)
        throw ValidationError("VariableLayout: variable \"" + name +
                              "\" accessed with the wrong structure");
      return e;
    }
  throw ValidationError("VariableLayout: unknown variable \"" + name + "\"");
}

Vector VariableLayout::diagonal_value(const std::string& name, const Vector& x) const {
  const Entry& e = find(name, Kind::Diagonal);
  return x.segment(e.offset, e.count);
}

Matrix VariableLayout::symmetric_value(const std::string& name, const Vector& x) const {
  const Entry& e = find(name, Kind::Symmetric);
  Matrix m(e.rows, e.rows);
  int k = e.offset;
  for (int c = 0; c < e.rows; ++c)
    for (int r = c; r < e.rows; ++r) {
      m(r, c) = x(k);
      m(c, r) = x(k);
      ++k;
    }
  return m;
}

Matrix VariableLayout::rectangular_value(const std::string& name, const Vector& x) const {
  const Entry& e = find(name, Kind::Rectangular);
  Matrix m(e.rows, e.cols);
  int k = e.offset;
  for (int r = 0; r < e.rows; ++r)
    for (int c = 0; c < e.cols; ++c) m(r, c) = x(k++);
  return m;
}

double VariableLayout::scalar_value(const std::string& name, const Vector& x) const {
  const Entry& e = find(name, Kind::Scalar);
  return x(e.offset);
}

void LmiProblem::add_constraint(const std::string& name,
                                const std::function<Matrix(const Vector&)>& expr,
                                ConstraintSense sense, double eps) {
  const int n = layout.total();
  const double sign = sense == ConstraintSense::NegativeDefinite ? -1.0 : 1.0;

  Matrix base = expr(Vector::Zero(n));
  if (base.rows() != base.cols())
    throw ValidationError("LmiProblem: constraint \"" + name + "\" is not square");
  const double scale = 1.0 + max_abs(base);
  auto check_symmetric = [&](const Matrix& m) {
    if (max_abs(m - m.transpose()) > 1e-12 * scale)
      throw ValidationError("LmiProblem: constraint \"" + name +
                            "\" produced an asymmetric matrix");
  };
  check_symmetric(base);

  LmiConstraint c;
  c.name = name;
  c.dim = static_cast<int>(base.rows());
  c.f0 = sign * symmetrize(base) - eps * Matrix::Identity(c.dim, c.dim);
  for (int i = 0; i < n; ++i) {
    Vector probe = Vector::Zero(n);
    probe(i) = 1.0;
    Matrix coeff = expr(probe) - base;
    check_symmetric(coeff);
    if (max_abs(coeff) > 0.0) c.coeffs.emplace_back(i, sign * symmetrize(coeff));
  }
  constraints.push_back(std::move(c));
}

Matrix LmiProblem::constraint_value(const LmiConstraint& c, const Vector& x) const {
  Matrix m = c.f0;
  for (const auto& [idx, coeff] : c.coeffs) m += x(idx) * coeff;
  return m;
}

double affinity_defect(const std::function<Matrix(const Vector&)>& expr,
                       int nvars, int trials, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix base = expr(Vector::Zero(nvars));
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vector a(nvars), b(nvars);
    for (int i = 0; i < nvars; ++i) {
      a(i) = unif(rng);
      b(i) = unif(rng);
    }
    double al = unif(rng), be = unif(rng);
    Matrix combined = expr(al * a + be * b);
    Matrix superposed = al * (expr(a) - base) + be * (expr(b) - base) + base;
    worst = std::max(worst, max_abs(combined - superposed));
  }
  return worst;
}

}  // namespace uio
