#ifndef RESTIE_GEOMETRY_HPP
#define RESTIE_GEOMETRY_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace restie::geo {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) {
        return a.x == b.x && a.y == b.y;
    }
};

// Closed ring of vertices in a planar frame (meters). Stored explicitly
// closed: front() == back(). Loaders accept implicit closure and normalize.
struct Ring {
    std::vector<Point> vertices;

    // Number of distinct boundary vertices (closing vertex not counted).
    std::size_t corner_count() const {
        if (vertices.size() < 2) return vertices.size();
        return vertices.size() - 1;
    }
    bool closed() const {
        return vertices.size() >= 2 && vertices.front() == vertices.back();
    }
};

struct PolygonWithHoles {
    Ring outer;
    std::vector<Ring> holes;
};

struct MultiPolygon {
    std::vector<PolygonWithHoles> polygons;

    bool empty() const { return polygons.empty(); }
};

struct BBox {
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;

    bool valid() const { return min_x <= max_x && min_y <= max_y; }
    bool intersects(const BBox& o) const {
        return min_x <= o.max_x && o.min_x <= max_x &&
               min_y <= o.max_y && o.min_y <= max_y;
    }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

struct RingViolation {
    std::size_t ring_index; // rings numbered per multipolygon: outer, then holes, per polygon
    std::string message;
};

struct ValidationReport {
    std::vector<RingViolation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Shoelace area, positive for counterclockwise rings.
double signed_ring_area(const Ring& ring);

// Ensures front() == back(); appends the closing vertex if missing.
void close_ring(Ring& ring);

// Outer rings counterclockwise, holes clockwise.
void normalize_orientation(MultiPolygon& geom);

// Unsigned area: sum over polygons of |outer| minus holes.
double polygon_area(const MultiPolygon& geom);

// Checks every ring invariant: >= 3 distinct vertices, finite coordinates,
// no self-intersection, holes contained in their outer ring.
ValidationReport validate_geometry(const MultiPolygon& geom);

// Even-odd test; points on the boundary count as inside.
bool point_in_ring(const Ring& ring, const Point& p);
bool point_in_polygon(const PolygonWithHoles& poly, const Point& p);
bool point_in_multipolygon(const MultiPolygon& geom, const Point& p);

// Undefined (invalid bbox) for empty geometry.
BBox bounding_box(const MultiPolygon& geom);
BBox bounding_box(const Ring& ring);

// Rounds every coordinate to the given grid (default 1e-9 m) and drops
// zero-length edges and rings that collapse below 3 corners.
MultiPolygon snap_to_grid(const MultiPolygon& geom, double grid = 1e-9);

} // namespace restie::geo

#endif
