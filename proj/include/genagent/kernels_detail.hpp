#pragma once

#include <cstddef>

// Per-pair formulas shared by the scalar backend and the scalar tails of the
// SIMD backend. The ternary min/max spellings mirror VMINPD/VMAXPD lane
// semantics; translation units including this header are compiled with
// -ffp-contract=off so no FMA contraction can change the rounding.

namespace genagent::kern::detail {

// Squared distance from point (px,py) to segment (ax,ay)-(bx,by).
inline double pt_seg_dist2(double px, double py, double ax, double ay, double bx, double by) {
    const double abx = bx - ax;
    const double aby = by - ay;
    const double apx = px - ax;
    const double apy = py - ay;
    const double len2 = abx * abx + aby * aby;
    const double dot = apx * abx + apy * aby;
    double t = dot / len2;
    t = (len2 > 0.0) ? t : 0.0;
    t = (t > 0.0) ? t : 0.0;
    t = (t < 1.0) ? t : 1.0;
    const double cx = apx - t * abx;
    const double cy = apy - t * aby;
    return cx * cx + cy * cy;
}

// Squared distance between segments P=(p0,p1) and Q=(q0,q1). A proper
// interior crossing yields exactly 0; touches are caught by the endpoint
// distances, which are 0 at a touch.
inline double seg_seg_dist2(double px0, double py0, double px1, double py1,
                            double qx0, double qy0, double qx1, double qy1) {
    const double sx = qx1 - qx0;
    const double sy = qy1 - qy0;
    const double rx = px1 - px0;
    const double ry = py1 - py0;
    const double d1 = sx * (py0 - qy0) - sy * (px0 - qx0);
    const double d2 = sx * (py1 - qy0) - sy * (px1 - qx0);
    const double d3 = rx * (qy0 - py0) - ry * (qx0 - px0);
    const double d4 = rx * (qy1 - py0) - ry * (qx1 - px0);
    const bool proper = (d1 * d2 < 0.0) && (d3 * d4 < 0.0);

    const double m1 = pt_seg_dist2(px0, py0, qx0, qy0, qx1, qy1);
    const double m2 = pt_seg_dist2(px1, py1, qx0, qy0, qx1, qy1);
    const double m3 = pt_seg_dist2(qx0, qy0, px0, py0, px1, py1);
    const double m4 = pt_seg_dist2(qx1, qy1, px0, py0, px1, py1);
    const double ma = (m1 < m2) ? m1 : m2;
    const double mb = (m3 < m4) ? m3 : m4;
    const double m = (ma < mb) ? ma : mb;
    return proper ? 0.0 : m;
}

}  // namespace genagent::kern::detail
