#include "genagent/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "genagent/fitness.hpp"

namespace genagent {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kOrthoCandidateDeg = 20.0;  // corners this close to right count toward squareness
constexpr double kOrthoNearDeg = 0.1;        // and this close count as square

// Unsigned angle between incident edge directions at ring vertex i, degrees.
double corner_angle_deg(const Polygon& p, std::size_t i) {
    const std::size_t n = p.size();
    const std::size_t h = (i + n - 1) % n;
    const double ux = p.x(i) - p.x(h), uy = p.y(i) - p.y(h);
    const double wx = p.x(i + 1) - p.x(i), wy = p.y(i + 1) - p.y(i);
    const double nu = std::sqrt(ux * ux + uy * uy);
    const double nw = std::sqrt(wx * wx + wy * wy);
    double c = (ux * wx + uy * wy) / (nu * nw);
    c = std::min(1.0, std::max(-1.0, c));
    return std::acos(c) * 180.0 / kPi;
}

double min_size_satisfaction(const Polygon& p, const ScaleSpec& spec) {
    const double side = ground_threshold(spec, spec.min_symbol_side_mm);
    const double min_area = side * side;
    return std::min(1.0, polygon_area(p) / min_area);
}

double granularity_satisfaction(const double* xs, const double* ys, std::size_t n,
                                const ScaleSpec& spec) {
    const double side = ground_threshold(spec, spec.min_symbol_side_mm);
    std::size_t ok = 0;
    const std::size_t edges = n - 1;
    for (std::size_t i = 0; i < edges; ++i) {
        const double dx = xs[i + 1] - xs[i];
        const double dy = ys[i + 1] - ys[i];
        if (std::sqrt(dx * dx + dy * dy) >= side) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(edges);
}

double squareness_satisfaction(const Polygon& p) {
    std::size_t candidates = 0, square = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double dev = std::fabs(corner_angle_deg(p, i) - 90.0);
        if (dev <= kOrthoCandidateDeg) {
            ++candidates;
            if (dev <= kOrthoNearDeg) ++square;
        }
    }
    if (candidates == 0) return 1.0;
    return static_cast<double>(square) / static_cast<double>(candidates);
}

std::int64_t cell_of(double v, double cell) {
    return static_cast<std::int64_t>(std::floor(v / cell));
}

}  // namespace

ConstraintClass constraint_class(ConstraintKind k) {
    return k == ConstraintKind::ShapePreservation ? ConstraintClass::Defensive
                                                  : ConstraintClass::Offensive;
}

const char* constraint_name(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::MinSize: return "min_size";
        case ConstraintKind::Granularity: return "granularity";
        case ConstraintKind::Squareness: return "squareness";
        case ConstraintKind::ShapePreservation: return "shape_preservation";
        default: return "overlap";
    }
}

std::vector<ConstraintEval> evaluate_internal(const MapObject& obj,
                                              const std::optional<Geometry>& geom,
                                              const ScaleSpec& spec) {
    std::vector<ConstraintEval> out;
    if (!geom) return out;

    auto add = [&out](ConstraintKind k, double s) {
        s = std::min(1.0, std::max(0.0, s));
        out.push_back({k, s, constraint_class(k)});
    };

    if (obj.kind == FeatureKind::Building) {
        const Polygon& p = std::get<Polygon>(*geom);
        add(ConstraintKind::MinSize, min_size_satisfaction(p, spec));
        add(ConstraintKind::Granularity,
            granularity_satisfaction(p.xs(), p.ys(), p.closed_size(), spec));
        add(ConstraintKind::Squareness, squareness_satisfaction(p));
    } else {
        const Polyline& l = std::get<Polyline>(*geom);
        add(ConstraintKind::Granularity, granularity_satisfaction(l.xs(), l.ys(), l.size(), spec));
    }
    const double os = shape_loss(obj.kind, obj.geometry, geom, spec, 1.0);
    add(ConstraintKind::ShapePreservation, std::max(0.0, 1.0 - os));
    return out;
}

bool defensive_violated(const std::vector<ConstraintEval>& evals, double defensive_floor) {
    for (const ConstraintEval& e : evals)
        if (e.cls == ConstraintClass::Defensive && e.satisfaction < defensive_floor) return true;
    return false;
}

bool all_offensive_satisfied(const std::vector<ConstraintEval>& evals) {
    for (const ConstraintEval& e : evals)
        if (e.cls == ConstraintClass::Offensive && e.satisfaction < 1.0) return false;
    return true;
}

double symbol_halfwidth(FeatureKind k, const ScaleSpec& spec) {
    return k == FeatureKind::Road ? ground_threshold(spec, spec.min_separation_mm) : 0.0;
}

double symbolized_separation(const Geometry& a, FeatureKind ka, const Geometry& b, FeatureKind kb,
                             const ScaleSpec& spec) {
    const double d =
        min_separation(a, b) - symbol_halfwidth(ka, spec) - symbol_halfwidth(kb, spec);
    return std::max(0.0, d);
}

std::size_t ConflictGraph::objects_in_conflict() const {
    std::size_t c = 0;
    for (const std::size_t d : degree)
        if (d >= 1) ++c;
    return c;
}

ConflictGraph build_conflict_graph(const std::vector<SceneItem>& items, const ScaleSpec& spec) {
    ConflictGraph g;
    const std::size_t n = items.size();
    g.node_ids.reserve(n);
    for (const SceneItem& it : items) g.node_ids.push_back(it.id);
    g.degree.assign(n, 0);
    if (n < 2) return g;

    const double thr = ground_threshold(spec, spec.min_separation_mm);
    const double cell = 4.0 * thr;

    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = 0.5 * thr + symbol_halfwidth(items[i].kind, spec);
        const BBox bb = bbox_expanded(bbox(*items[i].geometry), r);
        const std::int64_t x0 = cell_of(bb.minx, cell), x1 = cell_of(bb.maxx, cell);
        const std::int64_t y0 = cell_of(bb.miny, cell), y1 = cell_of(bb.maxy, cell);
        for (std::int64_t cx = x0; cx <= x1; ++cx)
            for (std::int64_t cy = y0; cy <= y1; ++cy) {
                const std::uint64_t key = (static_cast<std::uint64_t>(cx) << 32) ^
                                          (static_cast<std::uint64_t>(cy) & 0xffffffffull);
                grid[key].push_back(static_cast<std::uint32_t>(i));
            }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> cand;
    for (const auto& [key, bucket] : grid) {
        (void)key;
        for (std::size_t a = 0; a < bucket.size(); ++a)
            for (std::size_t b = a + 1; b < bucket.size(); ++b)
                cand.push_back({std::min(bucket[a], bucket[b]), std::max(bucket[a], bucket[b])});
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    for (const auto& [i, j] : cand) {
        const double d = symbolized_separation(*items[i].geometry, items[i].kind,
                                               *items[j].geometry, items[j].kind, spec);
        if (d < thr) {
            g.edges.push_back({i, j});
            ++g.degree[i];
            ++g.degree[j];
        }
    }
    return g;
}

}  // namespace genagent
