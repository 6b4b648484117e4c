#pragma once

#include <vector>

#include "specid/types.hpp"

namespace specid {

/// Convex region of the complex plane with its area moments.
struct HullRegion {
  ComplexList vertices;  // counterclockwise, no repeated points
  double area = 0.0;
  cdouble centroid;
  cdouble second_moment;  // area average of z^2
  // Fewer than three non-collinear points: vertices describe a segment (or a
  // point) and the moments are those of the uniform distribution on it.
  bool degenerate = false;

  bool contains(cdouble z, double tolerance = 0.0) const;
  double distance(cdouble z) const;
};

/// Andrew monotone chain hull. With `mirror`, the conjugate of every point is
/// added first so the region is symmetric about the real axis.
HullRegion convex_hull(const ComplexList& points, bool mirror = true);

}  // namespace specid
