#include "restie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace restie::geo {

namespace {

// Cross product of (b-a) x (c-a); > 0 when c lies left of a->b.
double orient(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    if (orient(a, b, p) != 0.0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

enum class SegRelation { None, Touch, Cross, Overlap };

// Classifies how closed segments [a1,a2] and [b1,b2] meet.
SegRelation segment_relation(const Point& a1, const Point& a2,
                             const Point& b1, const Point& b2) {
    const double d1 = orient(b1, b2, a1);
    const double d2 = orient(b1, b2, a2);
    const double d3 = orient(a1, a2, b1);
    const double d4 = orient(a1, a2, b2);

    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return SegRelation::Cross;

    if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
        // Collinear: overlap iff the 1-d projections share more than a point.
        const bool use_x = std::abs(a2.x - a1.x) >= std::abs(a2.y - a1.y) ||
                           std::abs(b2.x - b1.x) >= std::abs(b2.y - b1.y);
        const auto coord = [&](const Point& p) { return use_x ? p.x : p.y; };
        double alo = std::min(coord(a1), coord(a2)), ahi = std::max(coord(a1), coord(a2));
        double blo = std::min(coord(b1), coord(b2)), bhi = std::max(coord(b1), coord(b2));
        const double lo = std::max(alo, blo), hi = std::min(ahi, bhi);
        if (lo > hi) return SegRelation::None;
        if (lo == hi) return SegRelation::Touch;
        return SegRelation::Overlap;
    }

    if (d1 == 0 && on_segment(b1, b2, a1)) return SegRelation::Touch;
    if (d2 == 0 && on_segment(b1, b2, a2)) return SegRelation::Touch;
    if (d3 == 0 && on_segment(a1, a2, b1)) return SegRelation::Touch;
    if (d4 == 0 && on_segment(a1, a2, b2)) return SegRelation::Touch;
    return SegRelation::None;
}

struct Edge {
    Point a, b;
    std::size_t index;
    double min_x, max_x;
};

// Non-adjacent edges of a simple ring may not meet at all; adjacent edges
// may share only their common endpoint.
bool ring_self_intersects(const Ring& ring, std::string* what) {
    const auto& v = ring.vertices;
    if (v.size() < 4) return false; // closed triangle is the minimum
    const std::size_t n = v.size() - 1; // edge count

    std::vector<Edge> edges;
    edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Edge e{v[i], v[i + 1], i, 0, 0};
        e.min_x = std::min(e.a.x, e.b.x);
        e.max_x = std::max(e.a.x, e.b.x);
        edges.push_back(e);
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& l, const Edge& r) { return l.min_x < r.min_x; });

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (edges[j].min_x > edges[i].max_x) break;
            const std::size_t ia = edges[i].index, ib = edges[j].index;
            const std::size_t lo = std::min(ia, ib), hi = std::max(ia, ib);
            const bool adjacent = (hi == lo + 1) || (lo == 0 && hi == n - 1);
            const SegRelation rel =
                segment_relation(edges[i].a, edges[i].b, edges[j].a, edges[j].b);
            if (rel == SegRelation::None) continue;
            if (adjacent) {
                if (rel == SegRelation::Overlap) {
                    if (what) *what = "self-intersection: collinear spike";
                    return true;
                }
                continue; // shared endpoint
            }
            if (what) {
                *what = rel == SegRelation::Cross
                            ? "self-intersection: edges cross"
                            : (rel == SegRelation::Overlap
                                   ? "self-intersection: edges overlap"
                                   : "self-intersection: edges touch");
            }
            return true;
        }
    }
    return false;
}

} // namespace

double signed_ring_area(const Ring& ring) {
    const auto& v = ring.vertices;
    if (v.size() < 3) return 0.0;
    double acc = 0.0;
    const std::size_t last = v.size() - 1;
    for (std::size_t i = 0; i < last; ++i)
        acc += v[i].x * v[i + 1].y - v[i + 1].x * v[i].y;
    if (!(v.front() == v.back()))
        acc += v[last].x * v[0].y - v[0].x * v[last].y;
    return 0.5 * acc;
}

void close_ring(Ring& ring) {
    if (!ring.vertices.empty() && !(ring.vertices.front() == ring.vertices.back()))
        ring.vertices.push_back(ring.vertices.front());
}

void normalize_orientation(MultiPolygon& geom) {
    for (auto& poly : geom.polygons) {
        if (signed_ring_area(poly.outer) < 0.0)
            std::reverse(poly.outer.vertices.begin(), poly.outer.vertices.end());
        for (auto& hole : poly.holes)
            if (signed_ring_area(hole) > 0.0)
                std::reverse(hole.vertices.begin(), hole.vertices.end());
    }
}

double polygon_area(const MultiPolygon& geom) {
    double total = 0.0;
    for (const auto& poly : geom.polygons) {
        double a = std::abs(signed_ring_area(poly.outer));
        for (const auto& hole : poly.holes)
            a -= std::abs(signed_ring_area(hole));
        total += a;
    }
    return total;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        if (i) out << "; ";
        out << "ring " << violations[i].ring_index << ": " << violations[i].message;
    }
    return out.str();
}

ValidationReport validate_geometry(const MultiPolygon& geom) {
    ValidationReport report;
    std::size_t ring_index = 0;

    auto check_ring = [&](const Ring& raw) -> bool {
        bool usable = true;
        for (const auto& p : raw.vertices) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                report.violations.push_back({ring_index, "non-finite coordinate"});
                return false;
            }
        }
        Ring ring = raw;
        close_ring(ring);
        // distinct corners
        std::vector<Point> distinct;
        for (std::size_t i = 0; i + 1 < ring.vertices.size(); ++i) {
            if (distinct.empty() || !(distinct.back() == ring.vertices[i]))
                distinct.push_back(ring.vertices[i]);
            else {
                report.violations.push_back({ring_index, "repeated consecutive vertex"});
                usable = false;
            }
        }
        if (distinct.size() < 3) {
            report.violations.push_back(
                {ring_index, "degenerate ring: fewer than 3 distinct vertices"});
            return false;
        }
        if (usable) {
            std::string what;
            if (ring_self_intersects(ring, &what)) {
                report.violations.push_back({ring_index, what});
                usable = false;
            }
        }
        if (usable && signed_ring_area(ring) == 0.0) {
            report.violations.push_back({ring_index, "zero-area ring"});
            usable = false;
        }
        return usable;
    };

    for (const auto& poly : geom.polygons) {
        const std::size_t outer_index = ring_index;
        const bool outer_ok = check_ring(poly.outer);
        ++ring_index;
        Ring outer = poly.outer;
        close_ring(outer);
        for (const auto& hole : poly.holes) {
            const bool hole_ok = check_ring(hole);
            if (outer_ok && hole_ok) {
                Ring h = hole;
                close_ring(h);
                bool inside = true;
                for (const auto& p : h.vertices)
                    if (!point_in_ring(outer, p)) { inside = false; break; }
                if (inside) {
                    // vertices inside is necessary but not sufficient
                    for (std::size_t i = 0; inside && i + 1 < h.vertices.size(); ++i)
                        for (std::size_t j = 0; j + 1 < outer.vertices.size(); ++j)
                            if (segment_relation(h.vertices[i], h.vertices[i + 1],
                                                 outer.vertices[j], outer.vertices[j + 1]) ==
                                SegRelation::Cross) {
                                inside = false;
                                break;
                            }
                }
                if (!inside)
                    report.violations.push_back(
                        {ring_index, "hole not contained in outer ring " +
                                         std::to_string(outer_index)});
            }
            ++ring_index;
        }
    }
    return report;
}

bool point_in_ring(const Ring& ring, const Point& p) {
    const auto& v = ring.vertices;
    if (v.size() < 3) return false;
    const std::size_t n = v.front() == v.back() ? v.size() - 1 : v.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = v[j];
        const Point& b = v[i];
        if (on_segment(a, b, p)) return true; // boundary counts as inside
        if ((b.y > p.y) != (a.y > p.y)) {
            const double t = (p.y - b.y) / (a.y - b.y);
            const double cx = b.x + t * (a.x - b.x);
            if (p.x < cx) inside = !inside;
        }
    }
    return inside;
}

bool point_in_polygon(const PolygonWithHoles& poly, const Point& p) {
    if (!point_in_ring(poly.outer, p)) return false;
    for (const auto& hole : poly.holes) {
        // boundary of a hole still belongs to the polygon
        bool on_boundary = false;
        const auto& v = hole.vertices;
        const std::size_t n = v.size() >= 2 && v.front() == v.back() ? v.size() - 1 : v.size();
        for (std::size_t i = 0, j = n - 1; i < n && !on_boundary; j = i++)
            on_boundary = on_segment(v[j], v[i], p);
        if (on_boundary) return true;
        if (point_in_ring(hole, p)) return false;
    }
    return true;
}

bool point_in_multipolygon(const MultiPolygon& geom, const Point& p) {
    for (const auto& poly : geom.polygons)
        if (point_in_polygon(poly, p)) return true;
    return false;
}

BBox bounding_box(const Ring& ring) {
    BBox box{1.0, 1.0, -1.0, -1.0};
    for (const auto& p : ring.vertices) {
        if (!box.valid()) {
            box = {p.x, p.y, p.x, p.y};
        } else {
            box.min_x = std::min(box.min_x, p.x);
            box.min_y = std::min(box.min_y, p.y);
            box.max_x = std::max(box.max_x, p.x);
            box.max_y = std::max(box.max_y, p.y);
        }
    }
    return box;
}

BBox bounding_box(const MultiPolygon& geom) {
    BBox box{1.0, 1.0, -1.0, -1.0};
    for (const auto& poly : geom.polygons) {
        const BBox b = bounding_box(poly.outer);
        if (!b.valid()) continue;
        if (!box.valid()) {
            box = b;
        } else {
            box.min_x = std::min(box.min_x, b.min_x);
            box.min_y = std::min(box.min_y, b.min_y);
            box.max_x = std::max(box.max_x, b.max_x);
            box.max_y = std::max(box.max_y, b.max_y);
        }
    }
    return box;
}

MultiPolygon snap_to_grid(const MultiPolygon& geom, double grid) {
    const auto snap = [grid](double v) { return std::round(v / grid) * grid; };
    MultiPolygon out;
    for (const auto& poly : geom.polygons) {
        auto snap_ring = [&](const Ring& ring) {
            Ring r;
            for (const auto& p : ring.vertices) {
                Point q{snap(p.x), snap(p.y)};
                if (r.vertices.empty() || !(r.vertices.back() == q))
                    r.vertices.push_back(q);
            }
            if (r.vertices.size() >= 2 && r.vertices.front() == r.vertices.back())
                r.vertices.pop_back();
            close_ring(r);
            return r;
        };
        PolygonWithHoles p;
        p.outer = snap_ring(poly.outer);
        if (p.outer.corner_count() < 3) continue;
        for (const auto& hole : poly.holes) {
            Ring h = snap_ring(hole);
            if (h.corner_count() >= 3) p.holes.push_back(std::move(h));
        }
        out.polygons.push_back(std::move(p));
    }
    return out;
}

} // namespace restie::geo
