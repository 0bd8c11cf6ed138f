#include "restie/projection.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "restie/error.hpp"

namespace restie::geo {

Point equal_area_project(const Point& lonlat_deg) {
    if (!(lonlat_deg.x >= -180.0 && lonlat_deg.x <= 180.0) ||
        !(lonlat_deg.y >= -90.0 && lonlat_deg.y <= 90.0)) {
        std::ostringstream msg;
        msg << "coordinate out of lon/lat range: (" << lonlat_deg.x << ", "
            << lonlat_deg.y << ")";
        throw DataError(msg.str());
    }
    constexpr double deg = std::numbers::pi / 180.0;
    return Point{kEarthRadiusM * lonlat_deg.x * deg,
                 kEarthRadiusM * std::sin(lonlat_deg.y * deg)};
}

MultiPolygon equal_area_project(const MultiPolygon& geom_lonlat) {
    MultiPolygon out = geom_lonlat;
    for (auto& poly : out.polygons) {
        for (auto& p : poly.outer.vertices) p = equal_area_project(p);
        for (auto& hole : poly.holes)
            for (auto& p : hole.vertices) p = equal_area_project(p);
    }
    return out;
}

} // namespace restie::geo
