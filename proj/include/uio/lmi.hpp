#pragma once

#include <functional>
#include <string>
#include <vector>

#include "uio/linalg.hpp"

namespace uio {

/// Flattens named matrix decision variables into one real vector.
///
/// Structures: diagonal (n entries), symmetric (n(n+1)/2 entries, packed
/// lower-triangular column-major), rectangular (row-major), scalar.
class VariableLayout {
 public:
  int add_diagonal(const std::string& name, int n);
  int add_symmetric(const std::string& name, int n);
  int add_rectangular(const std::string& name, int rows, int cols);
  int add_scalar(const std::string& name);

  int total() const { return total_; }

  Vector diagonal_value(const std::string& name, const Vector& x) const;
  Matrix symmetric_value(const std::string& name, const Vector& x) const;
  Matrix rectangular_value(const std::string& name, const Vector& x) const;
  double scalar_value(const std::string& name, const Vector& x) const;

 private:
  enum class Kind { Diagonal, Symmetric, Rectangular, Scalar };
  struct Entry {
    std::string name;
    Kind kind;
    int rows, cols, offset, count;
  };
  const Entry& find(const std::string& name, Kind kind) const;

  std::vector<Entry> entries_;
  int total_ = 0;
};

/// One affine positive-semidefiniteness requirement F0 + sum_i x_i Fi >= 0.
struct LmiConstraint {
  std::string name;
  int dim = 0;
  Matrix f0;
  std::vector<std::pair<int, Matrix>> coeffs;  // (flat variable index, symmetric coefficient)
};

enum class ConstraintSense {
  NegativeDefinite,  // expr <= -eps I   (stored as -expr - eps I >= 0)
  PositiveDefinite,  // expr >=  eps I   (stored as  expr - eps I >= 0)
};

/// Feasibility problem: find x with every stored block >= 0 (strictly, with
/// the eps shifts already folded into the constant terms).
struct LmiProblem {
  VariableLayout layout;
  std::vector<LmiConstraint> constraints;

  /// Builds a constraint by probing the assembler at 0 and at unit vectors.
  /// The assembler must be affine in x and produce symmetric matrices
  /// (asymmetry beyond 1e-12 * scale throws).
  void add_constraint(const std::string& name,
                      const std::function<Matrix(const Vector&)>& expr,
                      ConstraintSense sense, double eps);

  /// Value of one stored block at x.
  Matrix constraint_value(const LmiConstraint& c, const Vector& x) const;
};

/// Audit that an assembler is affine: checks superposition on random probe
/// directions with a seeded generator. Returns the worst deviation.
double affinity_defect(const std::function<Matrix(const Vector&)>& expr,
                       int nvars, int trials = 8, unsigned seed = 20240817);

}  // namespace uio
