#ifndef RESTIE_PROJECTION_HPP
#define RESTIE_PROJECTION_HPP

#include "restie/geometry.hpp"

namespace restie::geo {

// Authalic sphere radius in meters.
inline constexpr double kEarthRadiusM = 6371008.8;

// Lambert cylindrical equal-area on the sphere, applied vertex-wise:
//   x = R * lon_rad,  y = R * sin(lat_rad)
// Input coordinates are degrees; throws DataError when out of
// [-180,180] x [-90,90].
Point equal_area_project(const Point& lonlat_deg);
MultiPolygon equal_area_project(const MultiPolygon& geom_lonlat);

} // namespace restie::geo

#endif
