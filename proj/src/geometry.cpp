#include "genagent/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <utility>

#include "genagent/kernels.hpp"
#include "genagent/kernels_detail.hpp"

namespace genagent {

namespace {

void check_coord(double v) {
    if (!std::isfinite(v) || std::fabs(v) > kMaxCoord)
        throw DegenerateGeometry("coordinate not finite or out of range");
}

struct ChainView {
    const double* xs;
    const double* ys;
    std::size_t n;
    const Polygon* poly;  // null for polylines
};

ChainView view_of(const Geometry& g) {
    if (const Polygon* p = std::get_if<Polygon>(&g))
        return {p->xs(), p->ys(), p->closed_size(), p};
    const Polyline& l = std::get<Polyline>(g);
    return {l.xs(), l.ys(), l.size(), nullptr};
}

std::uint64_t dbits(double v) {
    if (v == 0.0) v = 0.0;  // fold -0 and +0 onto one key
    return std::bit_cast<std::uint64_t>(v);
}

// |signed area| of an implicitly closed ring, first-vertex-relative.
double ring_area_abs(const std::vector<Point2>& ring) {
    if (ring.size() < 3) return 0.0;
    double s = 0.0;
    const double ox = ring[0].x, oy = ring[0].y;
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
        const double x1 = ring[i].x - ox, y1 = ring[i].y - oy;
        const double x2 = ring[i + 1].x - ox, y2 = ring[i + 1].y - oy;
        s += x1 * y2 - x2 * y1;
    }
    return 0.5 * std::fabs(s);
}

}  // namespace

double snap_coord(double v) {
    check_coord(v);
    return std::ldexp(std::nearbyint(std::ldexp(v, 29)), -29);
}

Point2 snap_point(Point2 p) { return {snap_coord(p.x), snap_coord(p.y)}; }

Polyline::Polyline(const std::vector<Point2>& pts) {
    if (pts.size() < 2) throw DegenerateGeometry("polyline needs at least 2 vertices");
    xs_.reserve(pts.size());
    ys_.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        check_coord(pts[i].x);
        check_coord(pts[i].y);
        if (i > 0 && pts[i] == pts[i - 1])
            throw DegenerateGeometry("repeated consecutive polyline vertex");
        xs_.push_back(pts[i].x);
        ys_.push_back(pts[i].y);
    }
}

Polyline Polyline::unchecked(std::vector<double> xs, std::vector<double> ys) {
    Polyline l;
    l.xs_ = std::move(xs);
    l.ys_ = std::move(ys);
    return l;
}

Polygon::Polygon(const std::vector<Point2>& ring) {
    const std::size_t n = ring.size();
    if (n < 3) throw DegenerateGeometry("polygon ring needs at least 3 vertices");
    for (const Point2& p : ring) {
        check_coord(p.x);
        check_coord(p.y);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (ring[i] == ring[(i + 1) % n])
            throw DegenerateGeometry("repeated consecutive ring vertex");

    double s = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x1 = ring[i].x - ring[0].x, y1 = ring[i].y - ring[0].y;
        const double x2 = ring[i + 1].x - ring[0].x, y2 = ring[i + 1].y - ring[0].y;
        s += x1 * y2 - x2 * y1;
    }
    if (s == 0.0) throw DegenerateGeometry("zero-area ring");

    xs_.reserve(n + 1);
    ys_.reserve(n + 1);
    if (s > 0.0) {
        for (const Point2& p : ring) {
            xs_.push_back(p.x);
            ys_.push_back(p.y);
        }
    } else {
        for (std::size_t i = n; i-- > 0;) {
            xs_.push_back(ring[i].x);
            ys_.push_back(ring[i].y);
        }
    }
    xs_.push_back(xs_[0]);
    ys_.push_back(ys_[0]);

    // Simplicity: non-adjacent edges must stay apart; adjacent edges must not
    // fold back along themselves.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (kern::detail::seg_seg_dist2(xs_[i], ys_[i], xs_[i + 1], ys_[i + 1], xs_[j],
                                            ys_[j], xs_[j + 1], ys_[j + 1]) == 0.0)
                throw DegenerateGeometry("self-intersecting ring");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + 2) % n;
        const double ux = xs_[i + 1] - xs_[i], uy = ys_[i + 1] - ys_[i];
        const double wx = xs_[k] - xs_[i + 1], wy = ys_[k] - ys_[i + 1];
        if (ux * wy - uy * wx == 0.0 && ux * wx + uy * wy < 0.0)
            throw DegenerateGeometry("ring folds back on itself");
    }
}

Polygon Polygon::unchecked(std::vector<double> xs_closed, std::vector<double> ys_closed) {
    Polygon p;
    p.xs_ = std::move(xs_closed);
    p.ys_ = std::move(ys_closed);
    return p;
}

BBox bbox(const Geometry& g) {
    const ChainView v = view_of(g);
    BBox b{v.xs[0], v.ys[0], v.xs[0], v.ys[0]};
    for (std::size_t i = 1; i < v.n; ++i) {
        b.minx = std::min(b.minx, v.xs[i]);
        b.maxx = std::max(b.maxx, v.xs[i]);
        b.miny = std::min(b.miny, v.ys[i]);
        b.maxy = std::max(b.maxy, v.ys[i]);
    }
    return b;
}

BBox bbox_expanded(const BBox& b, double r) {
    return {b.minx - r, b.miny - r, b.maxx + r, b.maxy + r};
}

bool bbox_overlap(const BBox& a, const BBox& b) {
    return a.minx <= b.maxx && b.minx <= a.maxx && a.miny <= b.maxy && b.miny <= a.maxy;
}

double polygon_area(const Polygon& p) {
    const double area = 0.5 * kern::shoelace_sum(p.xs(), p.ys(), p.closed_size());
    if (!(area > 0.0)) throw DegenerateGeometry("zero-area polygon");
    return area;
}

Point2 polygon_centroid(const Polygon& p) {
    const std::size_t n = p.size();
    const double ox = p.x(0), oy = p.y(0);
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = p.x(i) - ox, y1 = p.y(i) - oy;
        const double x2 = p.x(i + 1) - ox, y2 = p.y(i + 1) - oy;
        const double cross = x1 * y2 - x2 * y1;
        a2 += cross;
        cx += (x1 + x2) * cross;
        cy += (y1 + y2) * cross;
    }
    if (a2 == 0.0) throw DegenerateGeometry("zero-area polygon");
    return {ox + cx / (3.0 * a2), oy + cy / (3.0 * a2)};
}

double polyline_length(const Polyline& l) { return kern::path_length(l.xs(), l.ys(), l.size()); }

double ground_threshold(const ScaleSpec& spec, double mm) {
    return mm * spec.target_denominator / 1000.0;
}

bool point_in_polygon(const Polygon& p, double px, double py) {
    bool in = false;
    const double* xs = p.xs();
    const double* ys = p.ys();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double x1 = xs[i], y1 = ys[i];
        const double x2 = xs[i + 1], y2 = ys[i + 1];
        if ((y1 > py) != (y2 > py)) {
            const double xint = x1 + (py - y1) / (y2 - y1) * (x2 - x1);
            if (px < xint) in = !in;
        }
    }
    return in;
}

double min_separation(const Geometry& ga, const Geometry& gb) {
    const ChainView a = view_of(ga);
    const ChainView b = view_of(gb);
    const double d2 = kern::min_dist2_chains(a.xs, a.ys, a.n, b.xs, b.ys, b.n);
    if (d2 == 0.0) return 0.0;
    if (a.poly && point_in_polygon(*a.poly, b.xs[0], b.ys[0])) return 0.0;
    if (b.poly && point_in_polygon(*b.poly, a.xs[0], a.ys[0])) return 0.0;
    return std::sqrt(d2);
}

double areal_displacement(const Polyline& a, const Polyline& b) {
    if (!(a.front() == b.front()) || !(a.back() == b.back()))
        throw EndpointMismatch("polylines must share first and last vertices");

    // Closed tour: a forward, then b's interior backward.
    std::vector<Point2> tour;
    tour.reserve(a.size() + b.size());
    for (std::size_t i = 0; i < a.size(); ++i) tour.push_back(a.pt(i));
    for (std::size_t j = b.size() - 1; j-- > 1;) tour.push_back(b.pt(j));

    // Split tour edges at pairwise crossings and at vertices lying exactly on
    // other edges, so every enclosed loop closes at a repeated point.
    const std::size_t n = tour.size();
    std::vector<std::vector<std::pair<double, Point2>>> extra(n);
    auto edge_pt = [&](std::size_t e, bool end) -> const Point2& {
        return tour[end ? (e + 1) % n : e];
    };
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            const Point2 &p0 = edge_pt(i, false), &p1 = edge_pt(i, true);
            const Point2 &q0 = edge_pt(j, false), &q1 = edge_pt(j, true);
            const double rx = p1.x - p0.x, ry = p1.y - p0.y;
            const double sx = q1.x - q0.x, sy = q1.y - q0.y;
            const double d1 = sx * (p0.y - q0.y) - sy * (p0.x - q0.x);
            const double d2 = sx * (p1.y - q0.y) - sy * (p1.x - q0.x);
            const double d3 = rx * (q0.y - p0.y) - ry * (q0.x - p0.x);
            const double d4 = rx * (q1.y - p0.y) - ry * (q1.x - p0.x);
            if (d1 * d2 < 0.0 && d3 * d4 < 0.0) {
                const double t = d1 / (d1 - d2);
                const double u = d3 / (d3 - d4);
                const Point2 x{p0.x + t * rx, p0.y + t * ry};
                extra[i].push_back({t, x});
                extra[j].push_back({u, x});
                continue;
            }
            // T-junctions: an endpoint landing exactly in the other edge's interior.
            auto on_interior = [](const Point2& pt, const Point2& e0, const Point2& e1,
                                  double& tt) {
                if (kern::detail::pt_seg_dist2(pt.x, pt.y, e0.x, e0.y, e1.x, e1.y) != 0.0)
                    return false;
                const double ex = e1.x - e0.x, ey = e1.y - e0.y;
                tt = ((pt.x - e0.x) * ex + (pt.y - e0.y) * ey) / (ex * ex + ey * ey);
                return tt > 0.0 && tt < 1.0;
            };
            double tt;
            if (on_interior(q0, p0, p1, tt)) extra[i].push_back({tt, q0});
            if (on_interior(q1, p0, p1, tt)) extra[i].push_back({tt, q1});
            if (on_interior(p0, q0, q1, tt)) extra[j].push_back({tt, p0});
            if (on_interior(p1, q0, q1, tt)) extra[j].push_back({tt, p1});
        }
    }

    std::vector<Point2> walk;
    walk.reserve(n + 8);
    for (std::size_t i = 0; i < n; ++i) {
        walk.push_back(tour[i]);
        auto& ex = extra[i];
        std::sort(ex.begin(), ex.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        const Point2& next = edge_pt(i, true);
        for (const auto& [t, pt] : ex) {
            (void)t;
            if (pt == walk.back() || pt == next) continue;
            walk.push_back(pt);
        }
    }

    // Peel simple loops at repeated points; sum their absolute areas.
    double total = 0.0;
    std::vector<Point2> stk;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> at;
    for (const Point2& p : walk) {
        const auto key = std::make_pair(dbits(p.x), dbits(p.y));
        const auto it = at.find(key);
        if (it == at.end()) {
            at.emplace(key, stk.size());
            stk.push_back(p);
            continue;
        }
        const std::size_t k = it->second;
        total += ring_area_abs({stk.begin() + static_cast<std::ptrdiff_t>(k), stk.end()});
        for (std::size_t r = k + 1; r < stk.size(); ++r)
            at.erase(std::make_pair(dbits(stk[r].x), dbits(stk[r].y)));
        stk.resize(k + 1);
    }
    total += ring_area_abs(stk);
    return total;
}

std::uint64_t geometry_hash(const Geometry& g) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t w) {
        for (int i = 0; i < 8; ++i) {
            h ^= (w >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    };
    const ChainView v = view_of(g);
    mix(static_cast<std::uint64_t>(g.index()));
    mix(static_cast<std::uint64_t>(v.n));
    for (std::size_t i = 0; i < v.n; ++i) {
        mix(std::bit_cast<std::uint64_t>(v.xs[i]));
        mix(std::bit_cast<std::uint64_t>(v.ys[i]));
    }
    return h;
}

bool geometry_equal(const Geometry& a, const Geometry& b) {
    if (a.index() != b.index()) return false;
    const ChainView va = view_of(a);
    const ChainView vb = view_of(b);
    if (va.n != vb.n) return false;
    for (std::size_t i = 0; i < va.n; ++i) {
        if (std::bit_cast<std::uint64_t>(va.xs[i]) != std::bit_cast<std::uint64_t>(vb.xs[i]))
            return false;
        if (std::bit_cast<std::uint64_t>(va.ys[i]) != std::bit_cast<std::uint64_t>(vb.ys[i]))
            return false;
    }
    return true;
}

}  // namespace genagent
