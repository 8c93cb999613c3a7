#include "uio/vertex.hpp"

#include <algorithm>

#include "uio/errors.hpp"

namespace uio {

DiagBounds diag_bounds(const LambdaField& Lambda,
                       const std::function<double(double)>& weight,
                       int grid_points) {
  if (grid_points < 2) throw ValidationError("diag_bounds: need at least 2 grid points");
  const int n = Lambda.size();
  DiagBounds b;
  b.lo = Vector::Constant(n, std::numeric_limits<double>::infinity());
  b.hi = Vector::Constant(n, -std::numeric_limits<double>::infinity());
  b.grid_points = grid_points;
  for (int i = 0; i < grid_points; ++i) {
    double z = static_cast<double>(i) / (grid_points - 1);
    double w = weight ? weight(z) : 1.0;
    Vector d = Lambda.diag_at(z);
    if (d.minCoeff() <= 0.0)
      throw ValidationError("diag_bounds: Lambda entry <= 0 at z=" + std::to_string(z));
    for (int k = 0; k < n; ++k) {
      double v = w / d(k);
      b.lo(k) = std::min(b.lo(k), v);
      b.hi(k) = std::max(b.hi(k), v);
    }
  }
  return b;
}

VertexSet build_vertex_set(const DiagBounds& bounds) {
  const int n = static_cast<int>(bounds.lo.size());
  if (n == 0 || bounds.hi.size() != n)
    throw ValidationError("build_vertex_set: empty or mismatched bounds");
  for (int k = 0; k < n; ++k)
    if (!(bounds.lo(k) <= bounds.hi(k)))
      throw ValidationError("build_vertex_set: lower bound exceeds upper bound at entry " +
                            std::to_string(k));

  // entries with a degenerate interval offer one candidate, others two
  std::vector<int> choices(n);
  for (int k = 0; k < n; ++k) choices[k] = bounds.lo(k) == bounds.hi(k) ? 1 : 2;

  VertexSet vs;
  vs.bounds = bounds;
  std::vector<int> idx(n, 0);
  for (;;) {
    Vector v(n);
    for (int k = 0; k < n; ++k) v(k) = idx[k] == 0 ? bounds.lo(k) : bounds.hi(k);
    vs.vertices.push_back(v);
    int k = n - 1;
    while (k >= 0 && idx[k] + 1 >= choices[k]) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return vs;
}

}  // namespace uio
