#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "genagent/constraints.hpp"
#include "genagent/geojson_io.hpp"

namespace genagent {

namespace {

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<AgentState>& agents, const ScaleSpec& spec,
                       double px_per_mm) {
    const double s = px_per_mm * 1000.0 / spec.target_denominator;  // ground m -> px
    const double margin = 8.0;

    bool any = false;
    BBox box{0.0, 0.0, 0.0, 0.0};
    for (const AgentState& a : agents) {
        if (!a.committed) continue;
        const BBox b = bbox(*a.committed);
        if (!any) {
            box = b;
            any = true;
        } else {
            box.minx = std::min(box.minx, b.minx);
            box.miny = std::min(box.miny, b.miny);
            box.maxx = std::max(box.maxx, b.maxx);
            box.maxy = std::max(box.maxy, b.maxy);
        }
    }

    const double w = any ? (box.maxx - box.minx) * s + 2.0 * margin : 2.0 * margin;
    const double h = any ? (box.maxy - box.miny) * s + 2.0 * margin : 2.0 * margin;
    auto X = [&](double x) { return margin + (x - box.minx) * s; };
    auto Y = [&](double y) { return margin + (box.maxy - y) * s; };  // SVG y grows downward

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_px(w) + "\" height=\"" +
           fmt_px(h) + "\" viewBox=\"0 0 " + fmt_px(w) + " " + fmt_px(h) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#f7f5f0\"/>\n";

    const double road_w = 2.0 * symbol_halfwidth(FeatureKind::Road, spec) * s;
    for (const AgentState& a : agents) {
        if (!a.committed || a.object.kind != FeatureKind::Road) continue;
        const Polyline& l = std::get<Polyline>(*a.committed);
        std::string pts;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (i) pts += ' ';
            pts += fmt_px(X(l.x(i))) + "," + fmt_px(Y(l.y(i)));
        }
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#8a8378\" stroke-width=\"" +
               fmt_px(road_w) + "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
    }
    for (const AgentState& a : agents) {
        if (!a.committed || a.object.kind != FeatureKind::Building) continue;
        const Polygon& p = std::get<Polygon>(*a.committed);
        std::string d;
        for (std::size_t i = 0; i < p.size(); ++i) {
            d += (i == 0 ? "M" : "L");
            d += fmt_px(X(p.x(i))) + " " + fmt_px(Y(p.y(i)));
        }
        d += "Z";
        svg += "<path d=\"" + d + "\" fill=\"#c9c3b4\" stroke=\"#6b655a\" stroke-width=\"1\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace genagent
