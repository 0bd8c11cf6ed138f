#include <doctest.h>

#include <cmath>
#include <numbers>

#include "restie/error.hpp"
#include "restie/projection.hpp"
#include "restie/rng.hpp"

using namespace restie;
using geo::MultiPolygon;
using geo::Point;
using geo::Ring;

namespace {

MultiPolygon lonlat_polygon(const std::vector<Point>& pts) {
    Ring r;
    r.vertices = pts;
    geo::close_ring(r);
    MultiPolygon mp;
    mp.polygons.push_back({r, {}});
    return mp;
}

// insert k midpoints per edge (in lon/lat space) before projecting
MultiPolygon refine(const MultiPolygon& mp, int k) {
    MultiPolygon out;
    for (const auto& poly : mp.polygons) {
        Ring r;
        const auto& v = poly.outer.vertices;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            for (int j = 0; j < k; ++j) {
                const double t = static_cast<double>(j) / k;
                r.vertices.push_back({v[i].x + t * (v[i + 1].x - v[i].x),
                                      v[i].y + t * (v[i + 1].y - v[i].y)});
            }
        }
        geo::close_ring(r);
        out.polygons.push_back({r, {}});
    }
    return out;
}

} // namespace

TEST_CASE("projection fixed points and endpoints") {
    const Point origin = geo::equal_area_project(Point{0, 0});
    CHECK(origin.x == 0.0);
    CHECK(origin.y == 0.0);

    const Point corner = geo::equal_area_project(Point{180, 90});
    CHECK(corner.x ==
          doctest::Approx(geo::kEarthRadiusM * std::numbers::pi).epsilon(1e-12));
    CHECK(corner.y == doctest::Approx(geo::kEarthRadiusM).epsilon(1e-12));
}

TEST_CASE("projection rejects out-of-range coordinates") {
    CHECK_THROWS_AS(geo::equal_area_project(Point{181, 0}), DataError);
    CHECK_THROWS_AS(geo::equal_area_project(Point{0, -91}), DataError);
    CHECK_THROWS_AS(geo::equal_area_project(Point{std::nan(""), 0}), DataError);
}

TEST_CASE("whole-sphere rectangle maps to area 4*pi*R^2") {
    const auto sphere = lonlat_polygon(
        {{-180, -90}, {180, -90}, {180, 90}, {-180, 90}});
    const auto projected = geo::equal_area_project(sphere);
    const double area = geo::polygon_area(projected);
    const double want =
        4.0 * std::numbers::pi * geo::kEarthRadiusM * geo::kEarthRadiusM;
    CHECK(area == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("projected area converges under vertex refinement") {
    // quasi-circular lon/lat polygons with vertex spacing < 0.1 degrees
    Rng rng(11);
    for (int iter = 0; iter < 5; ++iter) {
        const double lon0 = rng.uniform(-90, 90);
        const double lat0 = rng.uniform(-55, 55);
        const double radius = rng.uniform(0.5, 1.5); // degrees
        std::vector<Point> pts;
        const int n = 160; // spacing ~ 2*pi*1.5/160 < 0.06 deg
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * std::numbers::pi * i / n;
            const double wobble = 1.0 + 0.2 * std::sin(3 * t + iter);
            pts.push_back({lon0 + radius * wobble * std::cos(t),
                           lat0 + radius * wobble * std::sin(t)});
        }
        const auto coarse = geo::equal_area_project(lonlat_polygon(pts));
        const auto fine =
            geo::equal_area_project(refine(lonlat_polygon(pts), 12));
        const double a = geo::polygon_area(coarse);
        const double b = geo::polygon_area(fine);
        CAPTURE(iter);
        CHECK(std::abs(a - b) / b < 1e-6);
    }
}
