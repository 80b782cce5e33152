#include "genagent/fitness.hpp"

#include <cmath>

namespace genagent {

bool fitness_better(const FitnessComponents& a, const FitnessComponents& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.nc != b.nc) return a.nc < b.nc;
    if (a.os != b.os) return a.os < b.os;
    return a.dp < b.dp;
}

double shape_loss(FeatureKind kind, const Geometry& original, const std::optional<Geometry>& result,
                  const ScaleSpec& spec, double elimination_penalty) {
    if (!result) return elimination_penalty;
    if (kind == FeatureKind::Building) {
        const double s0 = polygon_area(std::get<Polygon>(original));
        const double s1 = polygon_area(std::get<Polygon>(*result));
        return std::fabs(s1 - s0) / s0;
    }
    const Polyline& o = std::get<Polyline>(original);
    const Polyline* r = &std::get<Polyline>(*result);
    std::optional<Polyline> aligned;
    if (!(r->front() == o.front()) || !(r->back() == o.back())) {
        // Slide a displaced road back onto the original's anchor; exact on the
        // coordinate grid, so a pure displacement contributes zero shape loss.
        const double dx = o.front().x - r->front().x;
        const double dy = o.front().y - r->front().y;
        aligned.emplace(std::get<Polyline>(displace(Geometry(*r), dx, dy)));
        r = &*aligned;
    }
    const double len0 = polyline_length(o);
    if (!(len0 > 0.0)) throw DegenerateGeometry("zero-length original");
    const double sep = ground_threshold(spec, spec.min_separation_mm);
    return areal_displacement(o, *r) / (len0 * sep);
}

double displacement_term(const std::vector<DisplacementRecord>& records, double sep) {
    double s = 0.0;
    for (const DisplacementRecord& r : records) s += std::sqrt(r.dx * r.dx + r.dy * r.dy);
    return s / sep;
}

FitnessComponents general_fitness(const MapObject& obj, const std::optional<Geometry>& candidate,
                                  Point2 displacement,
                                  const std::vector<NeighborSnapshot>& neighbors,
                                  const ScaleSpec& spec, const Tunables& tun) {
    FitnessComponents fc;
    fc.os = shape_loss(obj.kind, obj.geometry, candidate, spec, tun.elimination_penalty);
    fc.dp = std::sqrt(displacement.x * displacement.x + displacement.y * displacement.y) /
            ground_threshold(spec, spec.min_separation_mm);

    std::vector<SceneItem> items;
    items.reserve(neighbors.size() + 1);
    if (candidate) items.push_back({obj.id, obj.kind, &*candidate});
    for (const NeighborSnapshot& nb : neighbors) items.push_back({nb.id, nb.kind, &nb.geometry});
    fc.nc = static_cast<double>(build_conflict_graph(items, spec).objects_in_conflict());

    fc.defensive_penalty =
        defensive_violated(evaluate_internal(obj, candidate, spec), tun.defensive_floor);
    fc.f = fc.defensive_penalty ? kInfiniteFitness : fc.nc + fc.dp + fc.os;
    return fc;
}

}  // namespace genagent
