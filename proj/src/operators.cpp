#include "genagent/operators.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "genagent/kernels.hpp"

namespace genagent {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Douglas-Peucker keep set over an open chain. A vertex is dropped iff its
// chord deviation is <= tol; the split vertex is the lowest-index maximum,
// which makes the routine idempotent at fixed tolerance.
std::vector<char> dp_keep(const double* xs, const double* ys, std::size_t n, double tol2) {
    std::vector<char> keep(n, 0);
    keep[0] = keep[n - 1] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> todo{{0, n - 1}};
    while (!todo.empty()) {
        const auto [lo, hi] = todo.back();
        todo.pop_back();
        if (hi - lo < 2) continue;
        const kern::ChordDev cd = kern::max_chord_dev2(xs + lo + 1, ys + lo + 1, hi - lo - 1,
                                                       xs[lo], ys[lo], xs[hi], ys[hi]);
        if (cd.dist2 <= tol2) continue;
        const std::size_t split = lo + 1 + cd.index;
        keep[split] = 1;
        todo.push_back({lo, split});
        todo.push_back({split, hi});
    }
    return keep;
}

std::optional<Polyline> try_simplify_line(const Polyline& line, double tolerance) {
    if (!(tolerance > 0.0) || line.size() == 2) return line;
    const std::size_t n = line.size();
    const std::vector<char> keep = dp_keep(line.xs(), line.ys(), n, tolerance * tolerance);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) continue;
        if (!xs.empty() && xs.back() == line.x(i) && ys.back() == line.y(i))
            return std::nullopt;  // distinct survivors collapsed onto one point
        xs.push_back(line.x(i));
        ys.push_back(line.y(i));
    }
    return Polyline::unchecked(std::move(xs), std::move(ys));
}

std::optional<Polygon> try_simplify_building(const Polygon& poly, double tolerance) {
    if (!(tolerance > 0.0)) return poly;
    const std::size_t n = poly.size();
    if (n <= 4) return poly;  // nothing removable without going under 4 vertices

    // Split the ring at its two mutually farthest vertices and run the chain
    // simplifier on each half.
    double bd = -1.0;
    std::size_t i0 = 0, i1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = poly.x(j) - poly.x(i);
            const double dy = poly.y(j) - poly.y(i);
            const double d = dx * dx + dy * dy;
            if (d > bd) {
                bd = d;
                i0 = i;
                i1 = j;
            }
        }
    }

    const double tol2 = tolerance * tolerance;
    std::vector<char> keep(n, 0);
    auto run_chain = [&](std::size_t from, std::size_t to) {
        std::vector<double> cx, cy;
        std::vector<std::size_t> idx;
        for (std::size_t i = from;; i = (i + 1) % n) {
            cx.push_back(poly.x(i));
            cy.push_back(poly.y(i));
            idx.push_back(i);
            if (i == to) break;
        }
        if (cx.size() < 3) {
            for (const std::size_t i : idx) keep[i] = 1;
            return;
        }
        const std::vector<char> k = dp_keep(cx.data(), cy.data(), cx.size(), tol2);
        for (std::size_t i = 0; i < idx.size(); ++i)
            if (k[i]) keep[idx[i]] = 1;
    };
    run_chain(i0, i1);
    run_chain(i1, i0);

    std::vector<Point2> ring;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) ring.push_back(poly.pt(i));
    if (ring.size() == n) return poly;
    if (ring.size() < 4) return std::nullopt;
    try {
        return Polygon(ring);
    } catch (const DegenerateGeometry&) {
        return std::nullopt;
    }
}

std::optional<Polygon> try_square_building(const Polygon& poly, double angle_tol_deg) {
    const std::size_t n = poly.size();
    double s4 = 0.0, c4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = poly.x(i + 1) - poly.x(i);
        const double dy = poly.y(i + 1) - poly.y(i);
        const double len = std::sqrt(dx * dx + dy * dy);
        const double ang = std::atan2(dy, dx);
        s4 += len * std::sin(4.0 * ang);
        c4 += len * std::cos(4.0 * ang);
    }
    if (s4 == 0.0 && c4 == 0.0) return std::nullopt;
    const double theta = 0.25 * std::atan2(s4, c4);

    // Exactly orthogonal frame: u0 and u1 have bitwise-zero dot product, so
    // every corner between snapped edges is exactly right-angled.
    const double u0x = std::cos(theta), u0y = std::sin(theta);
    const double u1x = -u0y, u1y = u0x;
    const double tol = angle_tol_deg * kPi / 180.0;

    struct Line {
        double px, py, dx, dy;
    };
    std::vector<Line> lines(n);
    double max_delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ex = poly.x(i + 1) - poly.x(i);
        const double ey = poly.y(i + 1) - poly.y(i);
        const double ang = std::atan2(ey, ex);
        const double rel = ang - theta;
        const long k = std::lround(rel / (kPi / 2.0));
        const double delta = rel - static_cast<double>(k) * (kPi / 2.0);
        if (std::fabs(delta) <= tol) {
            const long m = ((k % 4) + 4) % 4;
            double dx, dy;
            switch (m) {
                case 0: dx = u0x, dy = u0y; break;
                case 1: dx = u1x, dy = u1y; break;
                case 2: dx = -u0x, dy = -u0y; break;
                default: dx = -u1x, dy = -u1y; break;
            }
            lines[i] = {0.5 * (poly.x(i) + poly.x(i + 1)), 0.5 * (poly.y(i) + poly.y(i + 1)),
                        dx, dy};
            max_delta = std::max(max_delta, std::fabs(delta));
        } else {
            const double len = std::sqrt(ex * ex + ey * ey);
            lines[i] = {poly.x(i), poly.y(i), ex / len, ey / len};
        }
    }
    if (max_delta < 1e-12) return poly;  // already square where it matters

    std::vector<Point2> ring(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Line& a = lines[(i + n - 1) % n];
        const Line& b = lines[i];
        const double den = a.dx * b.dy - a.dy * b.dx;
        if (std::fabs(den) < 1e-12) {
            ring[i] = poly.pt(i);  // parallel incident edges: leave the corner be
            continue;
        }
        const double t = ((b.px - a.px) * b.dy - (b.py - a.py) * b.dx) / den;
        ring[i] = {a.px + t * a.dx, a.py + t * a.dy};
    }
    try {
        return Polygon(ring);
    } catch (const DegenerateGeometry&) {
        return std::nullopt;
    }
}

}  // namespace

const char* operator_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::Eliminate: return "eliminate";
        case OperatorKind::Simplify: return "simplify";
        case OperatorKind::Square: return "square";
        case OperatorKind::Enlarge: return "enlarge";
        default: return "displace";
    }
}

ParamBounds derive_bounds(const ScaleSpec& spec, const Tunables& tun) {
    return {2.0 * ground_threshold(spec, spec.min_separation_mm), tun.disp_max, tun.enl_max};
}

std::size_t flag_count(FeatureKind k) { return k == FeatureKind::Building ? 5 : 3; }
std::size_t param_count(FeatureKind k) { return k == FeatureKind::Building ? 4 : 3; }

int flag_index(FeatureKind k, OperatorKind op) {
    if (k == FeatureKind::Building) return static_cast<int>(op);
    switch (op) {
        case OperatorKind::Eliminate: return 0;
        case OperatorKind::Simplify: return 1;
        case OperatorKind::Displace: return 2;
        default: return -1;
    }
}

OperatorKind flag_operator(FeatureKind k, std::size_t bit) {
    if (k == FeatureKind::Building) return static_cast<OperatorKind>(bit);
    switch (bit) {
        case 0: return OperatorKind::Eliminate;
        case 1: return OperatorKind::Simplify;
        default: return OperatorKind::Displace;
    }
}

ParamRange param_range(FeatureKind k, std::size_t idx, const ParamBounds& b) {
    if (idx == 0) return {0.0, b.tol_max};
    if (idx == 1 || idx == 2) return {-b.disp_max, b.disp_max};
    (void)k;
    return {1.0, b.enl_max};
}

OperatorParams decode_params(FeatureKind k, const std::vector<double>& raw) {
    OperatorParams p;
    p.simplify_tolerance = raw[0];
    p.displace_dx = raw[1];
    p.displace_dy = raw[2];
    if (k == FeatureKind::Building) p.enlarge_factor = raw[3];
    return p;
}

Polyline simplify_line(const Polyline& line, double tolerance) {
    auto r = try_simplify_line(line, tolerance);
    return r ? *r : line;
}

Polygon simplify_building(const Polygon& poly, double tolerance) {
    auto r = try_simplify_building(poly, tolerance);
    return r ? *r : poly;
}

Geometry displace(const Geometry& g, double dx, double dy) {
    if (dx == 0.0 && dy == 0.0) return g;
    if (const Polygon* p = std::get_if<Polygon>(&g)) {
        std::vector<double> xs(p->closed_size()), ys(p->closed_size());
        for (std::size_t i = 0; i < p->closed_size(); ++i) {
            xs[i] = p->x(i) + dx;
            ys[i] = p->y(i) + dy;
        }
        return Polygon::unchecked(std::move(xs), std::move(ys));
    }
    const Polyline& l = std::get<Polyline>(g);
    std::vector<double> xs(l.size()), ys(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        xs[i] = l.x(i) + dx;
        ys[i] = l.y(i) + dy;
    }
    return Polyline::unchecked(std::move(xs), std::move(ys));
}

Polygon enlarge(const Polygon& poly, double factor) {
    if (factor == 1.0) return poly;
    const Point2 c = polygon_centroid(poly);
    std::vector<double> xs(poly.closed_size()), ys(poly.closed_size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        xs[i] = c.x + factor * (poly.x(i) - c.x);
        ys[i] = c.y + factor * (poly.y(i) - c.y);
    }
    xs[poly.size()] = xs[0];
    ys[poly.size()] = ys[0];
    return Polygon::unchecked(std::move(xs), std::move(ys));
}

Polygon square_building(const Polygon& poly, double angle_tolerance_deg) {
    auto r = try_square_building(poly, angle_tolerance_deg);
    return r ? *r : poly;
}

PlanOutcome apply_plan(const MapObject& obj, std::uint8_t flags, const OperatorParams& params,
                       const Tunables& tun, const ParamBounds& bounds) {
    PlanOutcome out;
    const FeatureKind kind = obj.kind;
    auto flag_set = [&](OperatorKind op) {
        const int i = flag_index(kind, op);
        return i >= 0 && (flags & (1u << i));
    };
    auto mark = [&](OperatorKind op, bool ok) {
        const std::uint8_t bit = 1u << flag_index(kind, op);
        (ok ? out.applied : out.fell_back) |= bit;
    };

    if (flag_set(OperatorKind::Eliminate)) {
        mark(OperatorKind::Eliminate, true);
        return out;  // short-circuit: geometry stays empty == eliminated
    }

    Geometry g = obj.geometry;
    if (flag_set(OperatorKind::Simplify)) {
        const double tol = clamp(params.simplify_tolerance, 0.0, bounds.tol_max);
        if (kind == FeatureKind::Building) {
            auto r = try_simplify_building(std::get<Polygon>(g), tol);
            if (r) g = std::move(*r);
            mark(OperatorKind::Simplify, r.has_value());
        } else {
            auto r = try_simplify_line(std::get<Polyline>(g), tol);
            if (r) g = std::move(*r);
            mark(OperatorKind::Simplify, r.has_value());
        }
    }
    if (flag_set(OperatorKind::Square)) {
        auto r = try_square_building(std::get<Polygon>(g), tun.angle_tolerance_deg);
        if (r) g = std::move(*r);
        mark(OperatorKind::Square, r.has_value());
    }
    if (flag_set(OperatorKind::Enlarge)) {
        const double f = clamp(params.enlarge_factor, 1.0, bounds.enl_max);
        g = enlarge(std::get<Polygon>(g), f);
        mark(OperatorKind::Enlarge, true);
    }
    if (flag_set(OperatorKind::Displace)) {
        const double dx = snap_coord(clamp(params.displace_dx, -bounds.disp_max, bounds.disp_max));
        const double dy = snap_coord(clamp(params.displace_dy, -bounds.disp_max, bounds.disp_max));
        g = displace(g, dx, dy);
        out.displacement = {dx, dy};
        mark(OperatorKind::Displace, true);
    }
    out.geometry = std::move(g);
    return out;
}

}  // namespace genagent
