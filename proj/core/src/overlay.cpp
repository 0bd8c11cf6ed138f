#include "restie/overlay.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "restie/error.hpp"
#include "restie/rng.hpp"

namespace restie::overlay {

using geo::MultiPolygon;
using geo::Point;

geo::MultiPolygon union_layers(const std::vector<geo::FloodLayer>& layers) {
    if (layers.empty())
        throw UsageError("union_layers: at least one flood layer required");
    std::vector<MultiPolygon> parts;
    // one part per polygon keeps every sweep operand free of overlapping
    // sibling rings
    for (const auto& layer : layers)
        for (const auto& poly : layer.geometry.polygons)
            parts.push_back(MultiPolygon{{poly}});
    return union_all(std::move(parts));
}

double polygon_intersection_area(const MultiPolygon& a, const MultiPolygon& b) {
    return geo::polygon_area(boolean_op(a, b, BoolOp::Intersection));
}

namespace {

// Only the polygons of `flood` whose bbox can touch `zone_box`.
MultiPolygon bbox_filter(const MultiPolygon& flood, const geo::BBox& zone_box) {
    MultiPolygon out;
    for (const auto& poly : flood.polygons) {
        geo::BBox b = geo::bounding_box(poly.outer);
        if (b.valid() && b.intersects(zone_box))
            out.polygons.push_back(poly);
    }
    return out;
}

} // namespace

std::vector<HazardExposure> compute_fp_rates(const std::vector<geo::Zone>& zones,
                                             const MultiPolygon& flood_union,
                                             unsigned threads) {
    std::vector<HazardExposure> out(zones.size());
    auto compute_one = [&](std::size_t i) {
        const geo::Zone& zone = zones[i];
        HazardExposure e;
        e.zone_id = zone.zone_id;
        e.zone_area = geo::polygon_area(zone.geometry);
        if (!(e.zone_area > 0.0))
            throw DataError("zone '" + zone.zone_id + "' has zero area");
        const geo::BBox zb = geo::bounding_box(zone.geometry);
        const MultiPolygon nearby = bbox_filter(flood_union, zb);
        e.flood_area = nearby.empty()
                           ? 0.0
                           : polygon_intersection_area(zone.geometry, nearby);
        e.flood_area = std::clamp(e.flood_area, 0.0, e.zone_area);
        e.fp_rate = std::clamp(100.0 * e.flood_area / e.zone_area, 0.0, 100.0);
        out[i] = std::move(e);
    };

    unsigned n_threads = threads ? threads : std::thread::hardware_concurrency();
    if (n_threads <= 1 || zones.size() < 2) {
        for (std::size_t i = 0; i < zones.size(); ++i) compute_one(i);
        return out;
    }
    n_threads = std::min<std::size_t>(n_threads, zones.size());
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::atomic<std::size_t> cursor{0};
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= zones.size()) return;
                try {
                    compute_one(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

MonteCarloEstimate monte_carlo_area_estimate(const MultiPolygon& a,
                                             const MultiPolygon& b,
                                             std::uint64_t samples,
                                             std::uint64_t seed) {
    if (samples == 0)
        throw UsageError("monte_carlo_area_estimate: samples must be >= 1");
    const geo::BBox box = geo::bounding_box(a);
    if (!box.valid() || !(box.width() > 0.0) || !(box.height() > 0.0))
        throw DataError("monte_carlo_area_estimate: empty bounding box");

    Rng rng(seed);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Point p{rng.uniform(box.min_x, box.max_x),
                      rng.uniform(box.min_y, box.max_y)};
        if (geo::point_in_multipolygon(a, p) && geo::point_in_multipolygon(b, p))
            ++hits;
    }
    const double box_area = box.width() * box.height();
    const double phat =
        static_cast<double>(hits) / static_cast<double>(samples);
    MonteCarloEstimate est;
    est.hits = hits;
    est.samples = samples;
    est.area = box_area * phat;
    est.standard_error =
        box_area * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    return est;
}

} // namespace restie::overlay
