#pragma once

#include <functional>
#include <vector>

#include "uio/plant.hpp"

namespace uio {

/// Per-entry interval bounds for weight(z) / Lambda_ii(z) over z in [0, 1].
struct DiagBounds {
  Vector lo, hi;
  int grid_points = 0;  // sampling resolution used to obtain the bounds
};

/// Samples weight(z)/Lambda_ii(z) on a uniform grid (endpoints included) and
/// records entrywise minima and maxima. weight defaults to 1.
DiagBounds diag_bounds(const LambdaField& Lambda,
                       const std::function<double(double)>& weight = {},
                       int grid_points = 1001);

/// Corner set of the interval box described by DiagBounds.
struct VertexSet {
  std::vector<Vector> vertices;  // deterministic order, duplicates removed
  DiagBounds bounds;
};

/// Enumerates all corners lo/hi per entry. Entries whose interval has zero
/// width contribute a single value, so the corner count halves per collapsed
/// entry rather than emitting duplicates.
VertexSet build_vertex_set(const DiagBounds& bounds);

}  // namespace uio
