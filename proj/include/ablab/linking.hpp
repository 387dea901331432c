#pragma once

#include "ablab/geometry.hpp"

namespace ablab {

// Linking number of a closed path with a circle, by signed counting of the
// path's crossings through the circle's spanning disk (+1 when the crossing
// runs along the disk normal). Exact integer output.
//
// Throws ValidationError if the path is not closed, and AmbiguousTopologyError
// if a path sample lies in the disk plane within tolerance, a crossing falls
// within 1e-9 of the disk rim, or the path comes within 1e-9 of the circle
// itself.
int linking_number(const Trajectory& path, const CircleSpec& ring);

}  // namespace ablab
