#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "genagent/geometry.hpp"

namespace genagent {

// Canonical application order is the enum order: elimination short-circuits,
// shape edits run before placement edits so the displacement bookkeeping is
// exact.
enum class OperatorKind : std::uint8_t { Eliminate = 0, Simplify, Square, Enlarge, Displace };

const char* operator_name(OperatorKind k);

// Engine-wide tunables beyond the scale thresholds; all configurable.
struct Tunables {
    double defensive_floor = 0.5;
    double elimination_penalty = 1.0;
    double disp_max = 10.0;             // meters, hard-capped at 1024 to keep translation exact
    double enl_max = 3.0;
    double angle_tolerance_deg = 10.0;  // squaring snap tolerance
};

// Search-box bounds for the real-valued plan parameters at a given scale.
struct ParamBounds {
    double tol_max;   // simplify tolerance in [0, tol_max]
    double disp_max;  // displacement components in [-disp_max, disp_max]
    double enl_max;   // enlarge factor in [1, enl_max]
};

ParamBounds derive_bounds(const ScaleSpec& spec, const Tunables& tun);

struct OperatorParams {
    double simplify_tolerance = 0.0;
    double displace_dx = 0.0;
    double displace_dy = 0.0;
    double enlarge_factor = 1.0;
};

// Flag-bit and parameter-slot layout per feature kind. Buildings carry
// [Eliminate, Simplify, Square, Enlarge, Displace] flags and
// [tolerance, dx, dy, factor] params; roads [Eliminate, Simplify, Displace]
// and [tolerance, dx, dy].
std::size_t flag_count(FeatureKind k);
std::size_t param_count(FeatureKind k);
int flag_index(FeatureKind k, OperatorKind op);  // -1 when inadmissible
OperatorKind flag_operator(FeatureKind k, std::size_t bit);

struct ParamRange {
    double lo, hi;
};
ParamRange param_range(FeatureKind k, std::size_t idx, const ParamBounds& b);
OperatorParams decode_params(FeatureKind k, const std::vector<double>& raw);

Polyline simplify_line(const Polyline& line, double tolerance);
Polygon simplify_building(const Polygon& poly, double tolerance);
Geometry displace(const Geometry& g, double dx, double dy);
Polygon enlarge(const Polygon& poly, double factor);
Polygon square_building(const Polygon& poly, double angle_tolerance_deg);

struct PlanOutcome {
    std::optional<Geometry> geometry;  // nullopt == eliminated
    Point2 displacement{0.0, 0.0};     // the exact translation the displace step applied
    std::uint8_t applied = 0;          // flag bits that executed
    std::uint8_t fell_back = 0;        // flag bits that hit their identity fallback
};

PlanOutcome apply_plan(const MapObject& obj, std::uint8_t flags, const OperatorParams& params,
                       const Tunables& tun, const ParamBounds& bounds);

}  // namespace genagent
