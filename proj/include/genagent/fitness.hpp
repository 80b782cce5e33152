#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "genagent/constraints.hpp"
#include "genagent/operators.hpp"

namespace genagent {

inline constexpr double kInfiniteFitness = std::numeric_limits<double>::infinity();

struct FitnessComponents {
    double os = 0.0;
    double nc = 0.0;  // integer-valued count, kept as double for the sum
    double dp = 0.0;
    double f = 0.0;   // nc + dp + os, or the infinite sentinel on a defensive violation
    bool defensive_penalty = false;
};

// Ordering used everywhere a single best plan must be picked; ties beyond
// these components fall to the chromosome encoding (see genome).
bool fitness_better(const FitnessComponents& a, const FitnessComponents& b);

struct DisplacementRecord {
    double dx = 0.0, dy = 0.0;
};

// Normalized shape distortion: buildings compare areas (|dS|/S0), roads
// measure the area swept between original and result, normalized by original
// length times the separation threshold. A displaced road is re-aligned onto
// the original's endpoints first (exact on the coordinate grid), so the shape
// term never double-counts the displacement term. Elimination costs a flat
// penalty.
double shape_loss(FeatureKind kind, const Geometry& original, const std::optional<Geometry>& result,
                  const ScaleSpec& spec, double elimination_penalty);

double displacement_term(const std::vector<DisplacementRecord>& records, double sep);

struct NeighborSnapshot {
    std::string id;
    FeatureKind kind;
    Geometry geometry;  // committed geometry of a live neighbor
};

// f = nc + dp + os for one candidate against an immutable neighbor snapshot.
// nc counts objects in conflict within {candidate} + neighbors; dp and os are
// the candidate's own. A defensive violation flips the infinite sentinel.
FitnessComponents general_fitness(const MapObject& obj, const std::optional<Geometry>& candidate,
                                  Point2 displacement,
                                  const std::vector<NeighborSnapshot>& neighbors,
                                  const ScaleSpec& spec, const Tunables& tun);

}  // namespace genagent
