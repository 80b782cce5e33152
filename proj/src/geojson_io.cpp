#include "genagent/geojson_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "genagent/constraints.hpp"

namespace genagent {

namespace {

using nlohmann::json;

Point2 parse_position(const json& c) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number())
        throw SchemaError("coordinates must be [x, y] positions");
    return snap_point({c[0].get<double>(), c[1].get<double>()});
}

std::vector<Point2> parse_positions(const json& arr) {
    if (!arr.is_array()) throw SchemaError("coordinates must be an array");
    std::vector<Point2> pts;
    pts.reserve(arr.size());
    for (const json& c : arr) pts.push_back(parse_position(c));
    return pts;
}

Geometry parse_geometry(FeatureKind kind, const json& g) {
    const std::string type = g.value("type", "");
    if (kind == FeatureKind::Building) {
        if (type != "Polygon")
            throw SchemaError("a building must be a Polygon, got \"" + type + "\"");
        const json& rings = g.at("coordinates");
        if (!rings.is_array() || rings.empty()) throw SchemaError("Polygon needs one ring");
        if (rings.size() > 1) throw SchemaError("polygon holes are not supported");
        std::vector<Point2> ring = parse_positions(rings[0]);
        if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
        return Polygon(ring);
    }
    if (type != "LineString")
        throw SchemaError("a road must be a LineString, got \"" + type + "\"");
    return Polyline(parse_positions(g.at("coordinates")));
}

std::string stable_id(const json& fid, std::size_t index) {
    if (fid.is_null()) return std::to_string(index);
    if (fid.is_string()) return fid.get<std::string>();
    if (fid.is_number_unsigned()) return std::to_string(fid.get<std::uint64_t>());
    if (fid.is_number_integer()) return std::to_string(fid.get<std::int64_t>());
    throw SchemaError("feature id must be a string or an integer");
}

json geometry_json(const Geometry& g) {
    json coords = json::array();
    if (std::holds_alternative<Polygon>(g)) {
        const Polygon& p = std::get<Polygon>(g);
        json ring = json::array();
        for (std::size_t i = 0; i < p.closed_size(); ++i) ring.push_back({p.x(i), p.y(i)});
        coords.push_back(std::move(ring));
        return json{{"type", "Polygon"}, {"coordinates", std::move(coords)}};
    }
    const Polyline& l = std::get<Polyline>(g);
    for (std::size_t i = 0; i < l.size(); ++i) coords.push_back({l.x(i), l.y(i)});
    return json{{"type", "LineString"}, {"coordinates", std::move(coords)}};
}

void dump_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << body;
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

}  // namespace

std::vector<MapObject> objects_of(const Scene& scene) {
    std::vector<MapObject> out;
    out.reserve(scene.features.size());
    for (const LoadedFeature& f : scene.features) out.push_back(f.object);
    return out;
}

Scene load_features(const std::string& path, const std::optional<BBox>& zone,
                    bool include_buildings, bool include_roads) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("input is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("type", "") != "FeatureCollection" || !j.contains("features") ||
        !j.at("features").is_array())
        throw SchemaError("input must be a GeoJSON FeatureCollection");

    Scene scene;
    std::set<std::string> seen;
    const json& feats = j.at("features");
    for (std::size_t idx = 0; idx < feats.size(); ++idx) {
        const std::string where = "feature " + std::to_string(idx) + ": ";
        try {
            const json& f = feats[idx];
            if (!f.is_object() || f.value("type", "") != "Feature")
                throw SchemaError("not a Feature object");
            json props = f.value("properties", json::object());
            if (props.is_null()) props = json::object();
            if (!props.is_object()) throw SchemaError("properties must be an object");
            if (!props.contains("kind") || !props.at("kind").is_string())
                throw SchemaError("missing string property \"kind\"");
            const std::string kind_s = props.at("kind").get<std::string>();
            FeatureKind kind;
            if (kind_s == "building")
                kind = FeatureKind::Building;
            else if (kind_s == "road")
                kind = FeatureKind::Road;
            else
                throw SchemaError("kind must be \"building\" or \"road\"");
            if (!f.contains("geometry") || !f.at("geometry").is_object())
                throw SchemaError("missing geometry object");

            json fid = f.contains("id") ? f.at("id") : json();
            std::string sid = stable_id(fid, idx);
            if (!seen.insert(sid).second) throw SchemaError("duplicate feature id \"" + sid + "\"");

            Geometry geom = parse_geometry(kind, f.at("geometry"));

            if (kind == FeatureKind::Building && !include_buildings) continue;
            if (kind == FeatureKind::Road && !include_roads) continue;
            if (zone && !bbox_overlap(bbox(geom), *zone)) continue;

            scene.features.push_back(
                {MapObject{std::move(sid), kind, std::move(geom)}, std::move(fid),
                 std::move(props)});
        } catch (const SchemaError& e) {
            throw SchemaError(where + e.what());
        } catch (const DegenerateGeometry& e) {
            throw SchemaError(where + "invalid geometry: " + e.what());
        }
    }
    if (scene.features.empty()) throw EmptyScene("no features selected");
    return scene;
}

json output_collection(const Scene& scene, const std::vector<AgentState>& agents) {
    if (scene.features.size() != agents.size())
        throw Error("agent list does not match the loaded scene");
    json feats = json::array();
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const LoadedFeature& lf = scene.features[i];
        const AgentState& a = agents[i];
        if (lf.object.id != a.object.id) throw Error("agent order does not match the scene");

        json props = lf.properties;
        props["eliminated"] = !a.committed.has_value();
        json ops = json::array();
        for (std::size_t bit = 0; bit < flag_count(a.object.kind); ++bit)
            if ((a.applied >> bit) & 1u)
                ops.push_back(operator_name(flag_operator(a.object.kind, bit)));
        props["applied_ops"] = std::move(ops);

        json f;
        f["type"] = "Feature";
        f["id"] = a.object.id;
        f["properties"] = std::move(props);
        f["geometry"] = a.committed ? geometry_json(*a.committed) : json();
        feats.push_back(std::move(f));
    }
    json out;
    out["type"] = "FeatureCollection";
    out["features"] = std::move(feats);
    return out;
}

std::string report_lines(const std::vector<RoundReport>& rounds) {
    std::string out;
    for (const RoundReport& r : rounds) {
        json o;
        o["round_index"] = r.round_index;
        o["global_nc"] = r.global_nc;
        o["global_f_sum"] = r.global_f_sum;
        json agents = json::array();
        for (const AgentReport& a : r.per_agent) {
            json e;
            e["id"] = a.id;
            e["f"] = a.fitness.f;
            e["nc"] = a.fitness.nc;
            e["dp"] = a.fitness.dp;
            e["os"] = a.fitness.os;
            e["defensive_penalty"] = a.fitness.defensive_penalty;
            agents.push_back(std::move(e));
        }
        o["per_agent"] = std::move(agents);
        out += o.dump();
        out += '\n';
    }
    return out;
}

void write_outputs(const Scene& scene, const SessionResult& result, const RunConfig& cfg) {
    dump_file(cfg.output_path, output_collection(scene, result.agents).dump(2) + "\n");
    if (!cfg.report_path.empty()) dump_file(cfg.report_path, report_lines(result.rounds));
    if (!cfg.svg_path.empty())
        dump_file(cfg.svg_path, render_svg(result.agents, cfg.scale, cfg.svg_px_per_mm));
}

}  // namespace genagent
