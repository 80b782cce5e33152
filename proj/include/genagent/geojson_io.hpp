#pragma once

#include <optional>
#include <string>
#include <vector>

#include "genagent/agents.hpp"
#include "genagent/geometry.hpp"
#include "genagent/run_config.hpp"
#include "json.hpp"

namespace genagent {

// One input feature with everything the writer must echo back.
struct LoadedFeature {
    MapObject object;
    nlohmann::json id;          // original feature id (null when absent)
    nlohmann::json properties;  // original properties object
};

struct Scene {
    std::vector<LoadedFeature> features;
};

std::vector<MapObject> objects_of(const Scene& scene);

// GeoJSON FeatureCollection -> validated MapObjects. Buildings must be
// Polygons (no holes), roads LineStrings; every feature needs a "kind"
// property. Coordinates are snapped to the engine grid. Features keep file
// order; ids come from the feature id, else the feature's index in the file.
Scene load_features(const std::string& path, const std::optional<BBox>& zone,
                    bool include_buildings, bool include_roads);

// Final geometries back out as GeoJSON (same features, same order, original
// properties plus "eliminated" and "applied_ops"), plus the optional
// JSON-lines round report and SVG render. Agents must be scene-aligned.
void write_outputs(const Scene& scene, const SessionResult& result, const RunConfig& cfg);

// The pieces write_outputs is made of, separable for tests.
nlohmann::json output_collection(const Scene& scene, const std::vector<AgentState>& agents);
std::string report_lines(const std::vector<RoundReport>& rounds);
std::string render_svg(const std::vector<AgentState>& agents, const ScaleSpec& spec,
                       double px_per_mm);

}  // namespace genagent
