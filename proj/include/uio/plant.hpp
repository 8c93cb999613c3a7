#pragma once

#include <functional>
#include <string>

#include "uio/linalg.hpp"

namespace uio {

/// Diagonal, z-dependent matrix of transport speeds on [0, 1].
///
/// Backed either by a closed-form evaluator or by a sampled table with
/// piecewise-linear interpolation. All entries must stay strictly positive;
/// PlantSpec::validate audits that on a grid.
class LambdaField {
 public:
  LambdaField() = default;

  static LambdaField from_function(int size, std::function<Vector(double)> fn,
                                   std::string label = "function");
  static LambdaField from_constant(Vector diag);
  /// samples: one row per grid point z(i), columns are the diagonal entries.
  /// Requires at least 101 sample points covering [0, 1] with z strictly increasing.
  static LambdaField from_samples(Vector z, Matrix samples);

  /// Diagonal entries at position z (clamped to [0, 1] for table lookups).
  Vector diag_at(double z) const;

  /// Largest diagonal entry over a uniform sweep of [0, 1] (endpoints included).
  double max_entry(int grid_points = 1001) const;

  int size() const { return size_; }
  const std::string& label() const { return label_; }

 private:
  int size_ = 0;
  std::function<Vector(double)> fn_;
  Vector sample_z_;
  Matrix sample_values_;
  std::string label_;
};

/// Incremental sector bound (U1, U2) with U1 >= 0 and U2 - U1 > 0.
struct SectorBound {
  Matrix U1, U2;

  int dim() const { return static_cast<int>(U1.rows()); }
  /// Shape and definiteness audit; throws ValidationError on failure.
  void validate() const;
};

/// Static nonlinearity f acting on Tx, together with its sector bound.
struct NonlinearitySpec {
  std::string name;  // "tanh", "zero", or "custom"
  std::function<Vector(const Vector&)> f;
  SectorBound bound;
};

NonlinearitySpec make_tanh_nonlinearity(const Matrix& U1, const Matrix& U2);
NonlinearitySpec make_zero_nonlinearity(int dim);
NonlinearitySpec make_custom_nonlinearity(std::string name,
                                          std::function<Vector(const Vector&)> f,
                                          SectorBound bound);

/// Semilinear transport system coupled to a boundary ODE:
///
///   d_t x + Lambda(z) d_z x + S f(T x) = 0        on z in (0, 1)
///   x(t, 0) = M chi(t)
///   chi'    = A chi + B u + E w                   (w unknown)
///   y1      = C x(t, 0),   y2 = N x(t, 1)
struct PlantSpec {
  LambdaField Lambda;
  Matrix M, A, B, E, C, N, S, T;
  NonlinearitySpec nonlinearity;

  int nx() const { return static_cast<int>(M.rows()); }
  int nchi() const { return static_cast<int>(A.rows()); }
  int nu() const { return static_cast<int>(B.cols()); }
  int nw() const { return static_cast<int>(E.cols()); }
  int ny1() const { return static_cast<int>(C.rows()); }
  int ny2() const { return static_cast<int>(N.rows()); }
  int nt() const { return static_cast<int>(T.rows()); }

  /// Dimension audit across all matrices plus Lambda positivity on a grid.
  void validate(int lambda_grid_points = 101) const;

  /// Largest coefficient magnitude over all plant data; used to scale
  /// strictness margins.
  double coefficient_scale() const;
};

}  // namespace uio
