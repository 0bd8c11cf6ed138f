#ifndef RESTIE_GEOJSON_HPP
#define RESTIE_GEOJSON_HPP

#include <optional>
#include <string>
#include <vector>

#include "restie/geometry.hpp"

namespace restie::geo {

enum class CrsMode {
    Planar, // coordinates already in planar meters
    LonLat, // degrees, projected on load via equal_area_project
};

struct Zone {
    std::string zone_id;
    MultiPolygon geometry; // planar meters, validated
    std::optional<double> median_household_income;
    std::optional<double> population;
};

struct FloodLayer {
    std::string label;
    MultiPolygon geometry;
};

// Loads a GeoJSON FeatureCollection of zone polygons. Every feature needs a
// string property "zone_id"; "median_household_income" and "population" are
// optional numbers. Geometry must be Polygon or MultiPolygon and pass
// validate_geometry. Throws DataError on any violation.
std::vector<Zone> load_zones(const std::string& path, CrsMode crs_mode);

// One FloodLayer per path; |paths| == |labels| >= 1 (UsageError otherwise).
// A layer whose collection contains no polygons is accepted with a warning
// pushed to `warnings` (zero-area geometry).
std::vector<FloodLayer> load_flood_layers(const std::vector<std::string>& paths,
                                          const std::vector<std::string>& labels,
                                          CrsMode crs_mode,
                                          std::vector<std::string>* warnings = nullptr);

// Property value for enriched feature output.
struct PropertyValue {
    enum class Kind { Null, Number, String };
    Kind kind = Kind::Null;
    double number = 0.0;
    std::string text;

    static PropertyValue null() { return {}; }
    static PropertyValue num(double v) { return {Kind::Number, v, {}}; }
    static PropertyValue str(std::string s) {
        return {Kind::String, 0.0, std::move(s)};
    }
};
using PropertyList = std::vector<std::pair<std::string, PropertyValue>>;

// Serializes zones back to a FeatureCollection (planar coordinates).
// `extra_properties[i]`, when given, is appended to feature i — used for the
// enriched choropleth output.
std::string zones_to_geojson(
    const std::vector<Zone>& zones,
    const std::vector<PropertyList>* extra_properties = nullptr);

std::string multipolygon_to_geojson(const MultiPolygon& geom,
                                    const std::string& label);

void write_text_file(const std::string& path, const std::string& content);

} // namespace restie::geo

#endif
