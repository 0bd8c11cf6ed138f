#ifndef RESTIE_OVERLAY_HPP
#define RESTIE_OVERLAY_HPP

#include <cstdint>
#include <vector>

#include "restie/bool_ops.hpp"
#include "restie/geojson.hpp"
#include "restie/geometry.hpp"

namespace restie::overlay {

enum class ExposureClass : std::uint8_t { Unassigned, L, H };

struct HazardExposure {
    std::string zone_id;
    double zone_area = 0.0;  // m^2
    double flood_area = 0.0; // m^2
    double fp_rate = 0.0;    // percent of zone area in the floodplain
    ExposureClass exposure_class = ExposureClass::Unassigned;
};

struct MonteCarloEstimate {
    double area = 0.0;
    double standard_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
};

// Geometric union of all layers; overlaps never double-counted.
geo::MultiPolygon union_layers(const std::vector<geo::FloodLayer>& layers);

// Area of a ∩ b.
double polygon_intersection_area(const geo::MultiPolygon& a,
                                 const geo::MultiPolygon& b);

// One record per zone: fp_rate = 100 * area(zone ∩ flood_union) / area(zone),
// clamped to [0, 100]. exposure_class is left Unassigned here. Deterministic
// regardless of `threads` (0 = hardware concurrency).
std::vector<HazardExposure> compute_fp_rates(const std::vector<geo::Zone>& zones,
                                             const geo::MultiPolygon& flood_union,
                                             unsigned threads = 0);

// Rejection sampling of a's bounding box with a seeded generator; estimates
// area(a ∩ b) with the binomial standard error. Independent of the exact
// overlay path, used as its oracle.
MonteCarloEstimate monte_carlo_area_estimate(const geo::MultiPolygon& a,
                                             const geo::MultiPolygon& b,
                                             std::uint64_t samples,
                                             std::uint64_t seed);

} // namespace restie::overlay

#endif
