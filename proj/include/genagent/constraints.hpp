#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genagent/geometry.hpp"

namespace genagent {

enum class ConstraintKind : std::uint8_t {
    MinSize,
    Granularity,
    Squareness,
    ShapePreservation,
    Overlap
};
enum class ConstraintClass : std::uint8_t { Offensive, Defensive };

// ShapePreservation guards the original character of the feature and must not
// be destroyed while repairing the others; everything else is fair game for
// the optimizer to chase.
ConstraintClass constraint_class(ConstraintKind k);
const char* constraint_name(ConstraintKind k);

struct ConstraintEval {
    ConstraintKind kind;
    double satisfaction;  // in [0, 1]
    ConstraintClass cls;
};

// Per-object constraints of the object's current geometry against its
// original. Buildings get MinSize, Granularity, Squareness, ShapePreservation;
// roads Granularity and ShapePreservation. Eliminated geometry has none.
std::vector<ConstraintEval> evaluate_internal(const MapObject& obj,
                                              const std::optional<Geometry>& geom,
                                              const ScaleSpec& spec);

bool defensive_violated(const std::vector<ConstraintEval>& evals, double defensive_floor);

bool all_offensive_satisfied(const std::vector<ConstraintEval>& evals);

// Drawn half-width a feature's symbol adds around its geometry: road lines are
// stroked at the minimum separation width per side, building outlines add
// nothing.
double symbol_halfwidth(FeatureKind k, const ScaleSpec& spec);

// Separation between two features after symbolization (never negative).
double symbolized_separation(const Geometry& a, FeatureKind ka, const Geometry& b, FeatureKind kb,
                             const ScaleSpec& spec);

struct SceneItem {
    std::string id;
    FeatureKind kind;
    const Geometry* geometry;  // borrowed; must outlive the graph build
};

struct ConflictGraph {
    std::vector<std::string> node_ids;                       // input order
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // i < j, sorted
    std::vector<std::size_t> degree;
    std::size_t objects_in_conflict() const;  // nodes with degree >= 1
};

// Edge set identical to the all-pairs check; a uniform grid (cell = 4x the
// separation threshold) prunes candidate pairs conservatively.
ConflictGraph build_conflict_graph(const std::vector<SceneItem>& items, const ScaleSpec& spec);

}  // namespace genagent
