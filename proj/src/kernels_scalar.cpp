#include "genagent/kernels.hpp"
#include "genagent/kernels_detail.hpp"

#include <cmath>
#include <limits>

namespace genagent::kern::scalar {

double min_dist2_chains(const double* ax, const double* ay, std::size_t an,
                        const double* bx, const double* by, std::size_t bn) {
    if (an < 2 || bn < 2) return -1.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < an; ++i) {
        const double px0 = ax[i], py0 = ay[i], px1 = ax[i + 1], py1 = ay[i + 1];
        for (std::size_t j = 0; j + 1 < bn; ++j) {
            const double d = detail::seg_seg_dist2(px0, py0, px1, py1,
                                                   bx[j], by[j], bx[j + 1], by[j + 1]);
            best = (d < best) ? d : best;
        }
        if (best == 0.0) return 0.0;
    }
    return best;
}

ChordDev max_chord_dev2(const double* xs, const double* ys, std::size_t n,
                        double x0, double y0, double x1, double y1) {
    ChordDev out{0.0, npos};
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = detail::pt_seg_dist2(xs[i], ys[i], x0, y0, x1, y1);
        if (d > best) {
            best = d;
            out.index = i;
        }
    }
    if (out.index != npos) out.dist2 = best;
    return out;
}

double shoelace_sum(const double* xs, const double* ys, std::size_t n) {
    if (n < 2) return 0.0;
    const double ox = xs[0], oy = ys[0];
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double x1 = xs[i] - ox, y1 = ys[i] - oy;
        const double x2 = xs[i + 1] - ox, y2 = ys[i + 1] - oy;
        sum += x1 * y2 - x2 * y1;
    }
    return sum;
}

double path_length(const double* xs, const double* ys, std::size_t n) {
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dx = xs[i + 1] - xs[i];
        const double dy = ys[i + 1] - ys[i];
        sum += std::sqrt(dx * dx + dy * dy);
    }
    return sum;
}

}  // namespace genagent::kern::scalar
