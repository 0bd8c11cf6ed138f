#ifndef RESTIE_BOOL_OPS_HPP
#define RESTIE_BOOL_OPS_HPP

#include <vector>

#include "restie/geometry.hpp"

namespace restie::overlay {

enum class BoolOp { Union, Intersection };

// Snap grid applied to operand coordinates before clipping (meters).
inline constexpr double kSnapGridM = 1e-9;

// Plane-sweep boolean operation on two multipolygons. Operands must be
// individually valid (validate_geometry). Output rings are explicitly
// closed, outers counterclockwise, holes clockwise.
geo::MultiPolygon boolean_op(const geo::MultiPolygon& subject,
                             const geo::MultiPolygon& clipping, BoolOp op);

// Union of many multipolygons, merged pairwise divide-and-conquer.
geo::MultiPolygon union_all(std::vector<geo::MultiPolygon> parts);

} // namespace restie::overlay

#endif
