// Boolean operations on multipolygons via the subdivide-and-select plane
// sweep (Martinez-Rueda style): subdivide all edges at intersection points
// while sweeping left to right, label each resulting edge against both
// operands, select the edges belonging to the requested operation, then chain
// them into contours with hole nesting.
//
// Operand coordinates are snapped to a fixed grid up front; intermediate
// intersection points are computed in doubles with endpoint reuse so that
// axis-parallel inputs stay exact.

#include "restie/bool_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <queue>
#include <set>
#include <unordered_map>
#include <vector>

#include "restie/error.hpp"

namespace restie::overlay {

using geo::MultiPolygon;
using geo::Point;
using geo::PolygonWithHoles;
using geo::Ring;

namespace {

double cross(const Point& a, const Point& b, const Point& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

enum class EdgeType : std::uint8_t {
    Normal,
    NonContributing,
    SameTransition,
    DifferentTransition,
};

struct SweepEvent {
    Point point;
    SweepEvent* other = nullptr;
    bool left = false;
    bool is_subject = false;
    EdgeType type = EdgeType::Normal;

    // sweep labels (maintained on left events)
    bool in_out = false;        // upward ray leaves own operand at this edge
    bool other_in_out = true;   // same, for the closest edge of the other operand
    SweepEvent* prev_in_result = nullptr;
    int result_transition = 0;  // 0 = not selected, +1 enters result, -1 leaves

    std::uint32_t contour_id = 0; // input ring ordinal
    std::uint32_t serial = 0;     // creation order, final comparator tiebreak

    // connector bookkeeping
    std::size_t pos = 0;
    int output_contour_id = -1;

    bool in_result() const { return result_transition != 0; }
    bool vertical() const { return point.x == other->point.x; }
    bool below(const Point& p) const {
        return left ? cross(point, other->point, p) > 0
                    : cross(other->point, point, p) > 0;
    }
    bool above(const Point& p) const { return !below(p); }
};

// Processing order: x, then y, right endpoints before left, bottom segment
// first, subject before clipping, creation order last.
bool event_after(const SweepEvent* a, const SweepEvent* b) {
    if (a == b) return false;
    if (a->point.x != b->point.x) return a->point.x > b->point.x;
    if (a->point.y != b->point.y) return a->point.y > b->point.y;
    if (a->left != b->left) return a->left;
    const double area = cross(a->point, a->other->point, b->other->point);
    if (area != 0.0) return !a->below(b->other->point);
    if (a->is_subject != b->is_subject) return !a->is_subject;
    return a->serial > b->serial;
}

struct EventQueueOrder {
    bool operator()(const SweepEvent* a, const SweepEvent* b) const {
        return event_after(a, b);
    }
};

// Status-line order: below-ness at the current sweep position.
struct StatusOrder {
    bool operator()(const SweepEvent* le1, const SweepEvent* le2) const {
        if (le1 == le2) return false;
        if (cross(le1->point, le1->other->point, le2->point) != 0.0 ||
            cross(le1->point, le1->other->point, le2->other->point) != 0.0) {
            if (le1->point == le2->point) return le1->below(le2->other->point);
            if (le1->point.x == le2->point.x) return le1->point.y < le2->point.y;
            if (event_after(le1, le2)) return le2->above(le1->point);
            return le1->below(le2->point);
        }
        // collinear segments
        if (le1->is_subject != le2->is_subject) return le1->is_subject;
        if (le1->point == le2->point) {
            if (le1->other->point == le2->other->point)
                return le1->contour_id != le2->contour_id
                           ? le1->contour_id < le2->contour_id
                           : le1->serial < le2->serial;
            return le1->contour_id != le2->contour_id
                       ? le1->contour_id < le2->contour_id
                       : le1->serial < le2->serial;
        }
        return event_after(le2, le1);
    }
};

using StatusLine = std::set<SweepEvent*, StatusOrder>;
using EventQueue =
    std::priority_queue<SweepEvent*, std::vector<SweepEvent*>, EventQueueOrder>;

// 0, 1 or 2 intersection points; overlap endpoints reuse input vertices.
int segment_intersection(const Point& a1, const Point& a2, const Point& b1,
                         const Point& b2, Point out[2]) {
    const double rx = a2.x - a1.x, ry = a2.y - a1.y;
    const double sx = b2.x - b1.x, sy = b2.y - b1.y;
    const double rxs = rx * sy - ry * sx;
    const double qpx = b1.x - a1.x, qpy = b1.y - a1.y;

    if (rxs == 0.0) {
        if (qpx * ry - qpy * rx != 0.0) return 0; // parallel, apart
        // collinear: order endpoints along the dominant axis
        const bool use_x = std::abs(rx) >= std::abs(ry);
        const auto coord = [use_x](const Point& p) { return use_x ? p.x : p.y; };
        Point alo = a1, ahi = a2, blo = b1, bhi = b2;
        if (coord(alo) > coord(ahi)) std::swap(alo, ahi);
        if (coord(blo) > coord(bhi)) std::swap(blo, bhi);
        const Point lo = coord(alo) >= coord(blo) ? alo : blo;
        const Point hi = coord(ahi) <= coord(bhi) ? ahi : bhi;
        if (coord(lo) > coord(hi)) return 0;
        if (lo == hi) {
            out[0] = lo;
            return 1;
        }
        out[0] = lo;
        out[1] = hi;
        return 2;
    }

    const double t = (qpx * sy - qpy * sx) / rxs;
    const double u = (qpx * ry - qpy * rx) / rxs;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return 0;
    if (t == 0.0) { out[0] = a1; return 1; }
    if (t == 1.0) { out[0] = a2; return 1; }
    if (u == 0.0) { out[0] = b1; return 1; }
    if (u == 1.0) { out[0] = b2; return 1; }
    out[0] = Point{a1.x + t * rx, a1.y + t * ry};
    return 1;
}

class BooleanSweep {
public:
    BooleanSweep(const MultiPolygon& subject, const MultiPolygon& clipping,
                 BoolOp op)
        : op_(op) {
        std::uint32_t ring_id = 0;
        add_operand(subject, true, ring_id);
        add_operand(clipping, false, ring_id);
        const geo::BBox sb = geo::bounding_box(subject);
        const geo::BBox cb = geo::bounding_box(clipping);
        right_bound_ = std::min(sb.max_x, cb.max_x);
    }

    MultiPolygon run() {
        sweep();
        return connect();
    }

private:
    BoolOp op_;
    std::deque<SweepEvent> storage_;
    EventQueue queue_;
    std::vector<SweepEvent*> sorted_;
    double right_bound_ = 0.0;
    std::uint32_t next_serial_ = 0;

    SweepEvent* make_event(const Point& p, bool left, bool is_subject) {
        storage_.push_back(SweepEvent{});
        SweepEvent* e = &storage_.back();
        e->point = p;
        e->left = left;
        e->is_subject = is_subject;
        e->serial = next_serial_++;
        return e;
    }

    void add_segment(const Point& a, const Point& b, bool is_subject,
                     std::uint32_t ring_id) {
        if (a == b) return;
        SweepEvent* ea = make_event(a, true, is_subject);
        SweepEvent* eb = make_event(b, true, is_subject);
        ea->other = eb;
        eb->other = ea;
        ea->contour_id = eb->contour_id = ring_id;
        if (event_after(ea, eb))
            ea->left = false;
        else
            eb->left = false;
        queue_.push(ea);
        queue_.push(eb);
    }

    void add_operand(const MultiPolygon& mp, bool is_subject,
                     std::uint32_t& ring_id) {
        auto add_ring = [&](const Ring& ring) {
            const auto& v = ring.vertices;
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                add_segment(v[i], v[i + 1], is_subject, ring_id);
            if (!v.empty() && !(v.front() == v.back()))
                add_segment(v.back(), v.front(), is_subject, ring_id);
            ++ring_id;
        };
        for (const auto& poly : mp.polygons) {
            add_ring(poly.outer);
            for (const auto& hole : poly.holes) add_ring(hole);
        }
    }

    bool selected(const SweepEvent* e) const {
        switch (e->type) {
            case EdgeType::Normal:
                return op_ == BoolOp::Intersection ? !e->other_in_out
                                                   : e->other_in_out;
            case EdgeType::SameTransition:
                return true; // both union and intersection keep it once
            case EdgeType::DifferentTransition:
            case EdgeType::NonContributing:
                return false;
        }
        return false;
    }

    // sign of the result-ness change when crossing the edge upward
    int transition(const SweepEvent* e) const {
        if (e->type == EdgeType::SameTransition) {
            // coincident boundaries with interiors on the same side; the
            // other operand's state below reflects its own coincident edge,
            // not the region above, so derive purely from in_out
            return e->in_out ? -1 : +1;
        }
        const bool this_in = !e->in_out;
        const bool that_in = !e->other_in_out;
        const bool is_in = op_ == BoolOp::Intersection ? (this_in && that_in)
                                                       : (this_in || that_in);
        return is_in ? +1 : -1;
    }

    void compute_fields(SweepEvent* e, SweepEvent* prev) {
        if (prev == nullptr) {
            e->in_out = false;
            e->other_in_out = true;
            e->prev_in_result = nullptr;
        } else {
            if (e->is_subject == prev->is_subject) {
                e->in_out = !prev->in_out;
                e->other_in_out = prev->other_in_out;
            } else {
                e->in_out = !prev->other_in_out;
                e->other_in_out = prev->vertical() ? !prev->in_out : prev->in_out;
            }
            e->prev_in_result = (!selected(prev) || prev->vertical())
                                    ? prev->prev_in_result
                                    : prev;
        }
        e->result_transition = selected(e) ? transition(e) : 0;
    }

    void divide_segment(SweepEvent* e, const Point& p) {
        if (p == e->point || p == e->other->point) return;
        SweepEvent* right = make_event(p, false, e->is_subject); // of left half
        SweepEvent* left = make_event(p, true, e->is_subject);   // of right half
        right->contour_id = left->contour_id = e->contour_id;
        right->other = e;
        left->other = e->other;
        if (event_after(left, e->other)) {
            // degenerate rounding: keep queue order consistent
            e->other->left = true;
            left->left = false;
        }
        e->other->other = left;
        e->other = right;
        queue_.push(left);
        queue_.push(right);
    }

    // Returns 2 when the segments share their left endpoint (edge types were
    // reassigned and labels must be recomputed), 0/1/3 otherwise.
    int possible_intersection(SweepEvent* se1, SweepEvent* se2) {
        Point inter[2];
        const int n = segment_intersection(se1->point, se1->other->point,
                                           se2->point, se2->other->point, inter);
        if (n == 0) return 0;
        if (n == 1 && (se1->point == se2->point ||
                       se1->other->point == se2->other->point))
            return 0; // only share an endpoint
        if (n == 2 && se1->is_subject == se2->is_subject)
            return 0; // overlapping edges within one operand: parity handles it

        if (n == 1) {
            if (!(se1->point == inter[0]) && !(se1->other->point == inter[0]))
                divide_segment(se1, inter[0]);
            if (!(se2->point == inter[0]) && !(se2->other->point == inter[0]))
                divide_segment(se2, inter[0]);
            return 1;
        }

        // overlapping segments from different operands
        std::vector<SweepEvent*> events;
        bool left_coincide = false, right_coincide = false;
        if (se1->point == se2->point) {
            left_coincide = true;
        } else if (event_after(se1, se2)) {
            events.push_back(se2);
            events.push_back(se1);
        } else {
            events.push_back(se1);
            events.push_back(se2);
        }
        if (se1->other->point == se2->other->point) {
            right_coincide = true;
        } else if (event_after(se1->other, se2->other)) {
            events.push_back(se2->other);
            events.push_back(se1->other);
        } else {
            events.push_back(se1->other);
            events.push_back(se2->other);
        }

        if (left_coincide) {
            se2->type = EdgeType::NonContributing;
            se2->other->type = EdgeType::NonContributing;
            se1->type = (se2->in_out == se1->in_out)
                            ? EdgeType::SameTransition
                            : EdgeType::DifferentTransition;
            se1->other->type = se1->type;
            if (!right_coincide)
                divide_segment(events[1]->other, events[0]->point);
            return 2;
        }
        if (right_coincide) {
            divide_segment(events[0], events[1]->point);
            return 3;
        }
        if (events[0] != events[3]->other) {
            // partial overlap
            divide_segment(events[0], events[1]->point);
            divide_segment(events[1], events[2]->point);
            return 3;
        }
        // one segment fully contains the other
        divide_segment(events[0], events[1]->point);
        divide_segment(events[3]->other, events[2]->point);
        return 3;
    }

    void sweep() {
        StatusLine status;
        // erase by stored iterator: segment division mutates comparator
        // inputs, so re-navigating with find() is not reliable
        std::unordered_map<const SweepEvent*, StatusLine::iterator> position;
        while (!queue_.empty()) {
            SweepEvent* ev = queue_.top();
            queue_.pop();
            if (op_ == BoolOp::Intersection && ev->point.x > right_bound_)
                break;
            sorted_.push_back(ev);

            if (ev->left) {
                auto [it, inserted] = status.insert(ev);
                if (!inserted)
                    throw NumericError("overlay sweep: duplicate status entry");
                position[ev] = it;
                SweepEvent* prev =
                    it == status.begin() ? nullptr : *std::prev(it);
                auto next_it = std::next(it);

                compute_fields(ev, prev);
                if (next_it != status.end()) {
                    if (possible_intersection(ev, *next_it) == 2) {
                        compute_fields(ev, prev);
                        compute_fields(*next_it, ev);
                    }
                }
                if (prev != nullptr) {
                    if (possible_intersection(prev, ev) == 2) {
                        auto pi = std::prev(it);
                        SweepEvent* prevprev =
                            pi == status.begin() ? nullptr : *std::prev(pi);
                        compute_fields(prev, prevprev);
                        compute_fields(ev, prev);
                    }
                }
            } else {
                SweepEvent* le = ev->other;
                auto pos = position.find(le);
                if (pos != position.end()) {
                    auto it = pos->second;
                    SweepEvent* prev =
                        it == status.begin() ? nullptr : *std::prev(it);
                    auto next_it = std::next(it);
                    SweepEvent* next =
                        next_it == status.end() ? nullptr : *next_it;
                    status.erase(it);
                    position.erase(pos);
                    if (prev && next) possible_intersection(prev, next);
                }
            }
        }
    }

    struct Contour {
        std::vector<Point> points;
        int hole_of = -1;
        std::vector<int> hole_ids;
        std::uint32_t depth = 0;
    };

    // Next segment of the contour at vertex v: the first unprocessed
    // candidate rotating clockwise from the reverse of the incoming
    // direction. Each walk then hugs exactly one bounded face, so rings
    // stay simple even where the result touches itself at a point.
    std::size_t pick_next(const std::vector<SweepEvent*>& events,
                          const std::vector<char>& processed,
                          std::size_t run_begin, std::size_t run_end,
                          const Point& v, const Point& from) const {
        const double rx = from.x - v.x, ry = from.y - v.y;
        const auto sector = [&](double dx, double dy) {
            const double cr = rx * dy - ry * dx;
            if (cr > 0.0) return 0; // ccw angle in (0, 180)
            if (cr < 0.0) return 2; // ccw angle in (180, 360)
            return (rx * dx + ry * dy) < 0.0 ? 1 : 3;
        };
        std::size_t best = SIZE_MAX;
        double bx = 0.0, by = 0.0;
        int bsector = -1;
        for (std::size_t j = run_begin; j < run_end; ++j) {
            if (processed[j]) continue;
            const Point w = events[j]->other->point;
            const double dx = w.x - v.x, dy = w.y - v.y;
            const int s = sector(dx, dy);
            bool better;
            if (best == SIZE_MAX || s > bsector) {
                better = true;
            } else if (s < bsector) {
                better = false;
            } else {
                const double cr = bx * dy - by * dx;
                better = cr > 0.0 ||
                         (cr == 0.0 &&
                          events[j]->serial < events[best]->serial);
            }
            if (better) {
                best = j;
                bx = dx;
                by = dy;
                bsector = s;
            }
        }
        return best;
    }

    MultiPolygon connect() {
        std::vector<SweepEvent*> result;
        for (SweepEvent* e : sorted_) {
            if ((e->left && e->in_result()) ||
                (!e->left && e->other->in_result()))
                result.push_back(e);
        }
        std::sort(result.begin(), result.end(),
                  [](const SweepEvent* a, const SweepEvent* b) {
                      return event_after(b, a);
                  });
        for (std::size_t i = 0; i < result.size(); ++i) result[i]->pos = i;
        for (std::size_t i = 0; i < result.size(); ++i) {
            SweepEvent* e = result[i];
            if (!e->left) std::swap(e->pos, e->other->pos);
        }

        // contiguous same-point runs in the sorted result list
        std::vector<std::size_t> run_begin(result.size(), 0);
        std::vector<std::size_t> run_end(result.size(), 0);
        for (std::size_t lo = 0; lo < result.size();) {
            std::size_t hi = lo + 1;
            while (hi < result.size() && result[hi]->point == result[lo]->point)
                ++hi;
            for (std::size_t j = lo; j < hi; ++j) {
                run_begin[j] = lo;
                run_end[j] = hi;
            }
            lo = hi;
        }

        std::vector<Contour> contours;
        std::vector<char> processed(result.size(), 0);
        for (std::size_t i = 0; i < result.size(); ++i) {
            if (processed[i]) continue;
            const int contour_id = static_cast<int>(contours.size());
            Contour contour = start_contour(result[i], contours);

            std::size_t pos = i;
            const Point initial = result[i]->point;
            Point from = initial;
            contour.points.push_back(initial);
            const std::size_t guard_limit = 2 * result.size() + 4;
            std::size_t steps = 0;
            for (;;) {
                if (++steps > guard_limit)
                    throw NumericError("overlay: contour chaining failed");
                processed[pos] = 1;
                result[pos]->output_contour_id = contour_id;
                const std::size_t partner = result[pos]->pos;
                processed[partner] = 1;
                result[partner]->output_contour_id = contour_id;
                const Point v = result[partner]->point;
                contour.points.push_back(v);
                if (v == initial) break;
                pos = pick_next(result, processed, run_begin[partner],
                                run_end[partner], v, from);
                if (pos == SIZE_MAX)
                    throw NumericError("overlay: contour chain broke at a vertex");
                from = v;
            }
            contours.push_back(std::move(contour));
        }
        return assemble(contours);
    }

    Contour start_contour(const SweepEvent* event,
                          const std::vector<Contour>& contours) const {
        Contour contour;
        const SweepEvent* prev = event->prev_in_result;
        if (prev == nullptr || prev->output_contour_id < 0) return contour;
        const int lower_id = prev->output_contour_id;
        if (prev->result_transition > 0) {
            const Contour& lower = contours[lower_id];
            if (lower.hole_of >= 0) {
                contour.hole_of = lower.hole_of;
                contour.depth = lower.depth;
            } else {
                contour.hole_of = lower_id;
                contour.depth = lower.depth + 1;
            }
        } else {
            contour.hole_of = -1;
            contour.depth = contours[lower_id].depth;
        }
        return contour;
    }

    MultiPolygon assemble(std::vector<Contour>& contours) const {
        MultiPolygon out;
        std::vector<int> poly_index(contours.size(), -1);
        auto ring_of = [](const Contour& c) {
            Ring ring;
            ring.vertices = c.points;
            geo::close_ring(ring);
            return ring;
        };
        for (std::size_t i = 0; i < contours.size(); ++i) {
            const Contour& c = contours[i];
            if (c.hole_of >= 0) continue;
            Ring ring = ring_of(c);
            if (ring.corner_count() < 3 || geo::signed_ring_area(ring) == 0.0)
                continue;
            if (geo::signed_ring_area(ring) < 0.0)
                std::reverse(ring.vertices.begin(), ring.vertices.end());
            poly_index[i] = static_cast<int>(out.polygons.size());
            out.polygons.push_back(PolygonWithHoles{std::move(ring), {}});
        }
        for (std::size_t i = 0; i < contours.size(); ++i) {
            const Contour& c = contours[i];
            if (c.hole_of < 0) continue;
            const int parent = poly_index[static_cast<std::size_t>(c.hole_of)];
            if (parent < 0) continue;
            Ring ring = ring_of(c);
            if (ring.corner_count() < 3 || geo::signed_ring_area(ring) == 0.0)
                continue;
            if (geo::signed_ring_area(ring) > 0.0)
                std::reverse(ring.vertices.begin(), ring.vertices.end());
            out.polygons[static_cast<std::size_t>(parent)].holes.push_back(
                std::move(ring));
        }
        return out;
    }
};

MultiPolygon concat(const MultiPolygon& a, const MultiPolygon& b) {
    MultiPolygon out = a;
    out.polygons.insert(out.polygons.end(), b.polygons.begin(),
                        b.polygons.end());
    return out;
}

} // namespace

MultiPolygon boolean_op(const MultiPolygon& subject_in,
                        const MultiPolygon& clipping_in, BoolOp op) {
    MultiPolygon subject = geo::snap_to_grid(subject_in, kSnapGridM);
    MultiPolygon clipping = geo::snap_to_grid(clipping_in, kSnapGridM);

    if (subject.empty())
        return op == BoolOp::Union ? clipping : MultiPolygon{};
    if (clipping.empty())
        return op == BoolOp::Union ? subject : MultiPolygon{};
    const geo::BBox sb = geo::bounding_box(subject);
    const geo::BBox cb = geo::bounding_box(clipping);
    if (!sb.intersects(cb))
        return op == BoolOp::Union ? concat(subject, clipping) : MultiPolygon{};

    BooleanSweep sweep(subject, clipping, op);
    return sweep.run();
}

MultiPolygon union_all(std::vector<MultiPolygon> parts) {
    if (parts.empty()) return {};
    // pairwise merge keeps intermediate operands small and the fold
    // deterministic
    while (parts.size() > 1) {
        std::vector<MultiPolygon> merged;
        merged.reserve(parts.size() / 2 + 1);
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2)
            merged.push_back(boolean_op(parts[i], parts[i + 1], BoolOp::Union));
        if (parts.size() % 2 == 1) merged.push_back(std::move(parts.back()));
        parts = std::move(merged);
    }
    return std::move(parts.front());
}

} // namespace restie::overlay
