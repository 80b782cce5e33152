#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genagent/agents.hpp"
#include "genagent/geojson_io.hpp"
#include "genagent/run_config.hpp"

namespace {

std::uint64_t parse_env_seed(const char* text) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(text, &end, 10);
    if (errno != 0 || end == text || *end != '\0' || text[0] == '-')
        throw genagent::ConfigError("GENAGENT_SEED must be a non-negative integer");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace genagent;

    CLI::App app{"Scale-aware map generalization: each feature evolves its own operator plan."};

    std::string input, output, config_path, svg_path, report_path;
    double source_scale = 0.0, target_scale = 0.0, deadline_ms = 0.0;
    std::uint64_t seed = 0, workers = 0;
    std::vector<double> zone;
    std::vector<std::string> kinds;

    app.add_option("--input", input, "input GeoJSON FeatureCollection")->required();
    app.add_option("--output", output, "output GeoJSON path")->required();
    auto* src_opt = app.add_option("--source-scale", source_scale, "source scale denominator");
    auto* tgt_opt = app.add_option("--target-scale", target_scale, "target scale denominator");
    app.add_option("--config", config_path, "JSON config file layered under the flags");
    auto* seed_opt = app.add_option("--seed", seed, "session seed");
    auto* dl_opt = app.add_option("--deadline-ms", deadline_ms, "wall-clock budget in ms");
    app.add_option("--svg", svg_path, "also render an SVG here");
    app.add_option("--report", report_path, "also write a JSON-lines round report here");
    auto* zone_opt = app.add_option("--zone", zone, "minx,miny,maxx,maxy ground window")
                         ->delimiter(',')
                         ->expected(4);
    auto* kinds_opt =
        app.add_option("--kinds", kinds, "feature kinds to load: building,road")->delimiter(',');
    auto* workers_opt =
        app.add_option("--workers", workers, "GA worker threads (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        std::fputs(app.help().c_str(), stderr);
        return 2;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) load_config_file(cfg, config_path);
        if (const char* env = std::getenv("GENAGENT_SEED"); env != nullptr && !*seed_opt)
            cfg.session.seed = parse_env_seed(env);

        cfg.input_path = input;
        cfg.output_path = output;
        if (!svg_path.empty()) cfg.svg_path = svg_path;
        if (!report_path.empty()) cfg.report_path = report_path;
        if (*src_opt) cfg.scale.source_denominator = source_scale;
        if (*tgt_opt) cfg.scale.target_denominator = target_scale;
        if (*seed_opt) cfg.session.seed = seed;
        if (*dl_opt) cfg.session.deadline_ms = deadline_ms;
        if (*workers_opt) cfg.session.workers = static_cast<std::size_t>(workers);
        if (*zone_opt) cfg.zone = BBox{zone[0], zone[1], zone[2], zone[3]};
        if (*kinds_opt) {
            cfg.include_buildings = false;
            cfg.include_roads = false;
            for (const std::string& k : kinds) {
                if (k == "building")
                    cfg.include_buildings = true;
                else if (k == "road")
                    cfg.include_roads = true;
                else
                    throw ConfigError("--kinds entries must be \"building\" or \"road\"");
            }
        }
        validate(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const Scene scene =
            load_features(cfg.input_path, cfg.zone, cfg.include_buildings, cfg.include_roads);
        const SessionResult result =
            run_session(objects_of(scene), cfg.scale, cfg.ga, cfg.session, cfg.tun);
        write_outputs(scene, result, cfg);
        const double elapsed =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        const RoundReport& final_state = result.rounds.at(result.best_round);
        std::fprintf(stderr, "rounds=%zu nc=%zu f_sum=%.6g elapsed_ms=%lld\n",
                     result.rounds.size(), final_state.global_nc, final_state.global_f_sum,
                     static_cast<long long>(std::llround(elapsed)));
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
