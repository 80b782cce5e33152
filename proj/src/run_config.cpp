#include "genagent/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "json.hpp"

namespace genagent {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
    }
}

double num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
    return v.get<double>();
}

std::uint64_t uint_of(const json& obj, const char* key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned())
        throw ConfigError(std::string("config: ") + key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    check_keys(j,
               {"source_scale", "target_scale", "zone", "kinds", "seed", "ga", "session",
                "thresholds", "svg_px_per_mm"},
               "config");

    cfg.scale.source_denominator = num(j, "source_scale", cfg.scale.source_denominator);
    cfg.scale.target_denominator = num(j, "target_scale", cfg.scale.target_denominator);
    cfg.session.seed = uint_of(j, "seed", cfg.session.seed);
    cfg.svg_px_per_mm = num(j, "svg_px_per_mm", cfg.svg_px_per_mm);

    if (j.contains("zone")) {
        const json& z = j.at("zone");
        if (!z.is_array() || z.size() != 4 || !z[0].is_number() || !z[1].is_number() ||
            !z[2].is_number() || !z[3].is_number())
            throw ConfigError("config: zone must be [minx, miny, maxx, maxy]");
        cfg.zone = BBox{z[0].get<double>(), z[1].get<double>(), z[2].get<double>(),
                        z[3].get<double>()};
    }

    if (j.contains("kinds")) {
        const json& k = j.at("kinds");
        if (!k.is_array()) throw ConfigError("config: kinds must be an array");
        cfg.include_buildings = false;
        cfg.include_roads = false;
        for (const json& v : k) {
            if (v == "building")
                cfg.include_buildings = true;
            else if (v == "road")
                cfg.include_roads = true;
            else
                throw ConfigError("config: kinds entries must be \"building\" or \"road\"");
        }
    }

    if (j.contains("ga")) {
        const json& g = j.at("ga");
        if (!g.is_object()) throw ConfigError("config: ga must be an object");
        check_keys(g,
                   {"population_size", "max_generations", "fitness_threshold", "time_budget_ms",
                    "tournament_size", "crossover_rate", "flag_mutation_rate",
                    "param_mutation_sigma", "elitism_count", "lattice_levels"},
                   "config.ga");
        GaConfig& ga = cfg.ga;
        ga.population_size = uint_of(g, "population_size", ga.population_size);
        ga.max_generations = uint_of(g, "max_generations", ga.max_generations);
        ga.fitness_threshold = num(g, "fitness_threshold", ga.fitness_threshold);
        ga.time_budget_ms = num(g, "time_budget_ms", ga.time_budget_ms);
        ga.tournament_size = uint_of(g, "tournament_size", ga.tournament_size);
        ga.crossover_rate = num(g, "crossover_rate", ga.crossover_rate);
        ga.flag_mutation_rate = num(g, "flag_mutation_rate", ga.flag_mutation_rate);
        ga.param_mutation_sigma = num(g, "param_mutation_sigma", ga.param_mutation_sigma);
        ga.elitism_count = uint_of(g, "elitism_count", ga.elitism_count);
        ga.lattice_levels = uint_of(g, "lattice_levels", ga.lattice_levels);
    }

    if (j.contains("session")) {
        const json& s = j.at("session");
        if (!s.is_object()) throw ConfigError("config: session must be an object");
        check_keys(s, {"max_rounds", "deadline_ms", "workers"}, "config.session");
        cfg.session.max_rounds = uint_of(s, "max_rounds", cfg.session.max_rounds);
        cfg.session.deadline_ms = num(s, "deadline_ms", cfg.session.deadline_ms);
        cfg.session.workers = uint_of(s, "workers", cfg.session.workers);
    }

    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        if (!t.is_object()) throw ConfigError("config: thresholds must be an object");
        check_keys(t,
                   {"min_symbol_side_mm", "min_separation_mm", "defensive_floor",
                    "elimination_penalty", "disp_max", "enl_max", "angle_tolerance"},
                   "config.thresholds");
        cfg.scale.min_symbol_side_mm = num(t, "min_symbol_side_mm", cfg.scale.min_symbol_side_mm);
        cfg.scale.min_separation_mm = num(t, "min_separation_mm", cfg.scale.min_separation_mm);
        cfg.tun.defensive_floor = num(t, "defensive_floor", cfg.tun.defensive_floor);
        cfg.tun.elimination_penalty = num(t, "elimination_penalty", cfg.tun.elimination_penalty);
        cfg.tun.disp_max = num(t, "disp_max", cfg.tun.disp_max);
        cfg.tun.enl_max = num(t, "enl_max", cfg.tun.enl_max);
        cfg.tun.angle_tolerance_deg = num(t, "angle_tolerance", cfg.tun.angle_tolerance_deg);
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.input_path.empty()) throw ConfigError("an input path is required");
    if (cfg.output_path.empty()) throw ConfigError("an output path is required");
    std::vector<const std::string*> paths = {&cfg.input_path, &cfg.output_path};
    if (!cfg.svg_path.empty()) paths.push_back(&cfg.svg_path);
    if (!cfg.report_path.empty()) paths.push_back(&cfg.report_path);
    for (std::size_t i = 0; i < paths.size(); ++i)
        for (std::size_t k = i + 1; k < paths.size(); ++k)
            if (*paths[i] == *paths[k])
                throw ConfigError("input, output, svg and report paths must be distinct");

    if (!(cfg.scale.source_denominator > 0.0))
        throw ConfigError("source scale denominator must be positive");
    if (!(cfg.scale.target_denominator >= cfg.scale.source_denominator))
        throw ConfigError(
            "target scale denominator must be >= the source's (scale reduction only)");
    if (!(cfg.scale.min_symbol_side_mm > 0.0))
        throw ConfigError("min_symbol_side_mm must be positive");
    if (!(cfg.scale.min_separation_mm > 0.0))
        throw ConfigError("min_separation_mm must be positive");
    if (!(cfg.tun.defensive_floor > 0.0 && cfg.tun.defensive_floor <= 1.0))
        throw ConfigError("defensive_floor must be in (0, 1]");
    if (!(cfg.tun.elimination_penalty > 0.0))
        throw ConfigError("elimination_penalty must be positive");
    if (!(cfg.tun.disp_max > 0.0 && cfg.tun.disp_max <= 1024.0))
        throw ConfigError("disp_max must be in (0, 1024]");
    if (!(cfg.tun.enl_max >= 1.0)) throw ConfigError("enl_max must be at least 1");
    if (!(cfg.tun.angle_tolerance_deg > 0.0 && cfg.tun.angle_tolerance_deg <= 45.0))
        throw ConfigError("angle_tolerance must be in (0, 45] degrees");
    if (cfg.zone && !(cfg.zone->minx < cfg.zone->maxx && cfg.zone->miny < cfg.zone->maxy))
        throw ConfigError("zone must satisfy minx < maxx and miny < maxy");
    if (!cfg.include_buildings && !cfg.include_roads)
        throw ConfigError("at least one feature kind must be selected");
    if (!(cfg.svg_px_per_mm > 0.0)) throw ConfigError("svg_px_per_mm must be positive");
    if (cfg.session.max_rounds < 1) throw ConfigError("max_rounds must be at least 1");
    if (!(cfg.session.deadline_ms >= 0.0)) throw ConfigError("deadline_ms must be >= 0");
    validate(cfg.ga);
}

}  // namespace genagent
