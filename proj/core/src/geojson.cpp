#include "restie/geojson.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "restie/error.hpp"
#include "restie/projection.hpp"

namespace restie::geo {

using nlohmann::json;

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        std::ostringstream msg;
        msg << path << ": parse failure at byte " << e.byte << ": " << e.what();
        throw DataError(msg.str());
    }
}

Ring parse_ring(const json& coords, const std::string& context) {
    if (!coords.is_array() || coords.size() < 3)
        throw DataError(context + ": ring needs at least 3 positions");
    Ring ring;
    ring.vertices.reserve(coords.size() + 1);
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() ||
            !pos[1].is_number())
            throw DataError(context + ": position must be a [x, y] number pair");
        ring.vertices.push_back(
            Point{pos[0].get<double>(), pos[1].get<double>()});
    }
    close_ring(ring);
    return ring;
}

PolygonWithHoles parse_polygon(const json& rings, const std::string& context) {
    if (!rings.is_array() || rings.empty())
        throw DataError(context + ": polygon needs at least an outer ring");
    PolygonWithHoles poly;
    poly.outer = parse_ring(rings[0], context);
    for (std::size_t i = 1; i < rings.size(); ++i)
        poly.holes.push_back(parse_ring(rings[i], context));
    return poly;
}

MultiPolygon parse_geometry(const json& geom, const std::string& context) {
    if (!geom.is_object() || !geom.contains("type"))
        throw DataError(context + ": feature has no usable geometry");
    const std::string type = geom.value("type", "");
    if (!geom.contains("coordinates"))
        throw DataError(context + ": geometry has no coordinates");
    const json& coords = geom["coordinates"];
    MultiPolygon mp;
    if (type == "Polygon") {
        mp.polygons.push_back(parse_polygon(coords, context));
    } else if (type == "MultiPolygon") {
        for (const auto& poly : coords)
            mp.polygons.push_back(parse_polygon(poly, context));
    } else {
        throw DataError(context + ": geometry type '" + type +
                        "' is not Polygon or MultiPolygon");
    }
    return mp;
}

MultiPolygon load_validated_geometry(const json& geom, CrsMode crs_mode,
                                     const std::string& context) {
    MultiPolygon mp = parse_geometry(geom, context);
    if (crs_mode == CrsMode::LonLat) mp = equal_area_project(mp);
    normalize_orientation(mp);
    const ValidationReport report = validate_geometry(mp);
    if (!report.ok())
        throw DataError(context + ": invalid geometry: " + report.to_string());
    return mp;
}

std::optional<double> optional_number(const json& props, const char* key,
                                      const std::string& context) {
    if (!props.contains(key) || props[key].is_null()) return std::nullopt;
    if (!props[key].is_number())
        throw DataError(context + ": property '" + key + "' must be a number");
    return props[key].get<double>();
}

const json& features_of(const json& doc, const std::string& path) {
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array())
        throw DataError(path + ": not a GeoJSON FeatureCollection");
    return doc["features"];
}

json ring_to_json(const Ring& ring) {
    json arr = json::array();
    for (const auto& p : ring.vertices) arr.push_back({p.x, p.y});
    return arr;
}

json multipolygon_coords(const MultiPolygon& mp) {
    json arr = json::array();
    for (const auto& poly : mp.polygons) {
        json rings = json::array();
        rings.push_back(ring_to_json(poly.outer));
        for (const auto& hole : poly.holes) rings.push_back(ring_to_json(hole));
        arr.push_back(std::move(rings));
    }
    return arr;
}

} // namespace

std::vector<Zone> load_zones(const std::string& path, CrsMode crs_mode) {
    const json doc = parse_file(path);
    const json& features = features_of(doc, path);

    std::vector<Zone> zones;
    std::unordered_set<std::string> seen;
    zones.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const json& feature = features[i];
        const std::string feature_ctx =
            path + ": feature " + std::to_string(i);
        if (!feature.is_object())
            throw DataError(feature_ctx + ": not an object");
        const json props = feature.value("properties", json::object());
        if (!props.contains("zone_id") || !props["zone_id"].is_string())
            throw DataError(feature_ctx + ": missing string property 'zone_id'");
        Zone zone;
        zone.zone_id = props["zone_id"].get<std::string>();
        const std::string ctx = path + ": zone '" + zone.zone_id + "'";
        if (!seen.insert(zone.zone_id).second)
            throw DataError(path + ": duplicate zone_id '" + zone.zone_id + "'");
        zone.median_household_income =
            optional_number(props, "median_household_income", ctx);
        zone.population = optional_number(props, "population", ctx);
        if (!feature.contains("geometry"))
            throw DataError(ctx + ": feature has no geometry");
        zone.geometry = load_validated_geometry(feature["geometry"], crs_mode, ctx);
        if (!(polygon_area(zone.geometry) > 0.0))
            throw DataError(ctx + ": zone area must be positive");
        zones.push_back(std::move(zone));
    }
    return zones;
}

std::vector<FloodLayer> load_flood_layers(const std::vector<std::string>& paths,
                                          const std::vector<std::string>& labels,
                                          CrsMode crs_mode,
                                          std::vector<std::string>* warnings) {
    if (paths.empty())
        throw UsageError("at least one flood layer path is required");
    if (paths.size() != labels.size())
        throw UsageError("flood layer path/label count mismatch: " +
                         std::to_string(paths.size()) + " paths, " +
                         std::to_string(labels.size()) + " labels");

    std::vector<FloodLayer> layers;
    layers.reserve(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const json doc = parse_file(paths[i]);
        const json& features = features_of(doc, paths[i]);
        FloodLayer layer;
        layer.label = labels[i];
        for (std::size_t f = 0; f < features.size(); ++f) {
            const json& feature = features[f];
            const std::string ctx = paths[i] + ": layer '" + labels[i] +
                                    "' feature " + std::to_string(f);
            if (!feature.is_object() || !feature.contains("geometry"))
                throw DataError(ctx + ": feature has no geometry");
            MultiPolygon mp =
                load_validated_geometry(feature["geometry"], crs_mode, ctx);
            for (auto& poly : mp.polygons)
                layer.geometry.polygons.push_back(std::move(poly));
        }
        if (layer.geometry.empty() && warnings)
            warnings->push_back("flood layer '" + labels[i] +
                                "' has zero-area geometry (" + paths[i] + ")");
        layers.push_back(std::move(layer));
    }
    return layers;
}

std::string zones_to_geojson(const std::vector<Zone>& zones,
                             const std::vector<PropertyList>* extra_properties) {
    json features = json::array();
    for (std::size_t i = 0; i < zones.size(); ++i) {
        const Zone& zone = zones[i];
        json props;
        props["zone_id"] = zone.zone_id;
        if (zone.median_household_income)
            props["median_household_income"] = *zone.median_household_income;
        if (zone.population) props["population"] = *zone.population;
        if (extra_properties) {
            for (const auto& [key, value] : (*extra_properties)[i]) {
                switch (value.kind) {
                    case PropertyValue::Kind::Null: props[key] = nullptr; break;
                    case PropertyValue::Kind::Number: props[key] = value.number; break;
                    case PropertyValue::Kind::String: props[key] = value.text; break;
                }
            }
        }
        json feature;
        feature["type"] = "Feature";
        feature["properties"] = std::move(props);
        feature["geometry"] = {{"type", "MultiPolygon"},
                               {"coordinates", multipolygon_coords(zone.geometry)}};
        features.push_back(std::move(feature));
    }
    json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    return doc.dump(2) + "\n";
}

std::string multipolygon_to_geojson(const MultiPolygon& geom,
                                    const std::string& label) {
    json feature;
    feature["type"] = "Feature";
    feature["properties"] = {{"label", label}};
    feature["geometry"] = {{"type", "MultiPolygon"},
                           {"coordinates", multipolygon_coords(geom)}};
    json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = json::array({std::move(feature)});
    return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw DataError("write failed: " + path);
}

} // namespace restie::geo
