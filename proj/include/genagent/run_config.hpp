#pragma once

#include <optional>
#include <string>

#include "genagent/agents.hpp"
#include "genagent/genome.hpp"
#include "genagent/geometry.hpp"
#include "genagent/operators.hpp"

namespace genagent {

// One resolved run: defaults, overlaid by the config file, overlaid by CLI
// flags (the CLI layer lives in the tool; this struct is the merge target).
struct RunConfig {
    std::string input_path;
    std::string output_path;
    std::string svg_path;     // empty = no SVG
    std::string report_path;  // empty = no report
    std::optional<BBox> zone;
    bool include_buildings = true;
    bool include_roads = true;
    ScaleSpec scale;
    Tunables tun;
    GaConfig ga;
    SessionConfig session;
    double svg_px_per_mm = 4.0;
};

// Merge a JSON config file over cfg. Strict about key names so typos fail
// loudly instead of silently running defaults.
void load_config_file(RunConfig& cfg, const std::string& path);

void validate(const RunConfig& cfg);  // throws ConfigError

}  // namespace genagent
