#include "genagent/kernels.hpp"

#if GENAGENT_HAVE_AVX2_BACKEND

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "genagent/kernels_detail.hpp"

// Lane-for-lane mirror of kernels_detail.hpp. Only mul/add/sub/div/min/max/
// sqrt/blend are used (no FMA), so each lane rounds exactly like the scalar
// backend and the min/max reductions land on identical bits.

namespace genagent::kern::avx2 {

namespace {

inline __m256d v_pt_seg_dist2(__m256d px, __m256d py, __m256d ax, __m256d ay,
                              __m256d bx, __m256d by) {
    const __m256d abx = _mm256_sub_pd(bx, ax);
    const __m256d aby = _mm256_sub_pd(by, ay);
    const __m256d apx = _mm256_sub_pd(px, ax);
    const __m256d apy = _mm256_sub_pd(py, ay);
    const __m256d len2 = _mm256_add_pd(_mm256_mul_pd(abx, abx), _mm256_mul_pd(aby, aby));
    const __m256d dot = _mm256_add_pd(_mm256_mul_pd(apx, abx), _mm256_mul_pd(apy, aby));
    const __m256d zero = _mm256_setzero_pd();
    __m256d t = _mm256_div_pd(dot, len2);
    t = _mm256_and_pd(t, _mm256_cmp_pd(len2, zero, _CMP_GT_OQ));
    t = _mm256_max_pd(t, zero);
    t = _mm256_min_pd(t, _mm256_set1_pd(1.0));
    const __m256d cx = _mm256_sub_pd(apx, _mm256_mul_pd(t, abx));
    const __m256d cy = _mm256_sub_pd(apy, _mm256_mul_pd(t, aby));
    return _mm256_add_pd(_mm256_mul_pd(cx, cx), _mm256_mul_pd(cy, cy));
}

// Segment P broadcast, four consecutive segments of Q in lanes.
inline __m256d v_seg_seg_dist2(__m256d px0, __m256d py0, __m256d px1, __m256d py1,
                               __m256d qx0, __m256d qy0, __m256d qx1, __m256d qy1) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d sx = _mm256_sub_pd(qx1, qx0);
    const __m256d sy = _mm256_sub_pd(qy1, qy0);
    const __m256d rx = _mm256_sub_pd(px1, px0);
    const __m256d ry = _mm256_sub_pd(py1, py0);
    const __m256d d1 = _mm256_sub_pd(_mm256_mul_pd(sx, _mm256_sub_pd(py0, qy0)),
                                     _mm256_mul_pd(sy, _mm256_sub_pd(px0, qx0)));
    const __m256d d2 = _mm256_sub_pd(_mm256_mul_pd(sx, _mm256_sub_pd(py1, qy0)),
                                     _mm256_mul_pd(sy, _mm256_sub_pd(px1, qx0)));
    const __m256d d3 = _mm256_sub_pd(_mm256_mul_pd(rx, _mm256_sub_pd(qy0, py0)),
                                     _mm256_mul_pd(ry, _mm256_sub_pd(qx0, px0)));
    const __m256d d4 = _mm256_sub_pd(_mm256_mul_pd(rx, _mm256_sub_pd(qy1, py0)),
                                     _mm256_mul_pd(ry, _mm256_sub_pd(qx1, px0)));
    const __m256d proper =
        _mm256_and_pd(_mm256_cmp_pd(_mm256_mul_pd(d1, d2), zero, _CMP_LT_OQ),
                      _mm256_cmp_pd(_mm256_mul_pd(d3, d4), zero, _CMP_LT_OQ));

    const __m256d m1 = v_pt_seg_dist2(px0, py0, qx0, qy0, qx1, qy1);
    const __m256d m2 = v_pt_seg_dist2(px1, py1, qx0, qy0, qx1, qy1);
    const __m256d m3 = v_pt_seg_dist2(qx0, qy0, px0, py0, px1, py1);
    const __m256d m4 = v_pt_seg_dist2(qx1, qy1, px0, py0, px1, py1);
    const __m256d ma = _mm256_min_pd(m1, m2);
    const __m256d mb = _mm256_min_pd(m3, m4);
    const __m256d m = _mm256_min_pd(ma, mb);
    return _mm256_andnot_pd(proper, m);
}

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

inline double hsum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

}  // namespace

double min_dist2_chains(const double* ax, const double* ay, std::size_t an,
                        const double* bx, const double* by, std::size_t bn) {
    if (an < 2 || bn < 2) return -1.0;
    const std::size_t nb = bn - 1;
    __m256d vbest = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    double sbest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < an; ++i) {
        const __m256d px0 = _mm256_set1_pd(ax[i]);
        const __m256d py0 = _mm256_set1_pd(ay[i]);
        const __m256d px1 = _mm256_set1_pd(ax[i + 1]);
        const __m256d py1 = _mm256_set1_pd(ay[i + 1]);
        std::size_t j = 0;
        for (; j + 4 <= nb; j += 4) {
            const __m256d qx0 = _mm256_loadu_pd(bx + j);
            const __m256d qy0 = _mm256_loadu_pd(by + j);
            const __m256d qx1 = _mm256_loadu_pd(bx + j + 1);
            const __m256d qy1 = _mm256_loadu_pd(by + j + 1);
            vbest = _mm256_min_pd(vbest, v_seg_seg_dist2(px0, py0, px1, py1, qx0, qy0, qx1, qy1));
        }
        for (; j < nb; ++j) {
            const double d = detail::seg_seg_dist2(ax[i], ay[i], ax[i + 1], ay[i + 1],
                                                   bx[j], by[j], bx[j + 1], by[j + 1]);
            sbest = (d < sbest) ? d : sbest;
        }
        if (hmin(vbest) == 0.0 || sbest == 0.0) return 0.0;
    }
    const double v = hmin(vbest);
    return (v < sbest) ? v : sbest;
}

ChordDev max_chord_dev2(const double* xs, const double* ys, std::size_t n,
                        double x0, double y0, double x1, double y1) {
    const __m256d sax = _mm256_set1_pd(x0);
    const __m256d say = _mm256_set1_pd(y0);
    const __m256d sbx = _mm256_set1_pd(x1);
    const __m256d sby = _mm256_set1_pd(y1);
    __m256d vbest = _mm256_set1_pd(-1.0);
    __m256i vidx = _mm256_setzero_si256();
    __m256i cur = _mm256_set_epi64x(3, 2, 1, 0);
    const __m256i step = _mm256_set1_epi64x(4);
    std::size_t j = 0;
    const std::size_t vec_end = (n / 4) * 4;
    for (; j < vec_end; j += 4) {
        const __m256d px = _mm256_loadu_pd(xs + j);
        const __m256d py = _mm256_loadu_pd(ys + j);
        const __m256d d = v_pt_seg_dist2(px, py, sax, say, sbx, sby);
        const __m256d gt = _mm256_cmp_pd(d, vbest, _CMP_GT_OQ);
        vbest = _mm256_blendv_pd(vbest, d, gt);
        vidx = _mm256_castpd_si256(
            _mm256_blendv_pd(_mm256_castsi256_pd(vidx), _mm256_castsi256_pd(cur), gt));
        cur = _mm256_add_epi64(cur, step);
    }
    double best = -1.0;
    std::size_t bidx = npos;
    if (vec_end > 0) {
        alignas(32) double dv[4];
        alignas(32) uint64_t iv[4];
        _mm256_store_pd(dv, vbest);
        _mm256_store_si256(reinterpret_cast<__m256i*>(iv), vidx);
        for (int k = 0; k < 4; ++k) {
            if (dv[k] > best || (dv[k] == best && iv[k] < bidx)) {
                best = dv[k];
                bidx = static_cast<std::size_t>(iv[k]);
            }
        }
    }
    for (; j < n; ++j) {
        const double d = detail::pt_seg_dist2(xs[j], ys[j], x0, y0, x1, y1);
        if (d > best) {
            best = d;
            bidx = j;
        }
    }
    if (bidx == npos) return {0.0, npos};
    return {best, bidx};
}

double shoelace_sum(const double* xs, const double* ys, std::size_t n) {
    if (n < 2) return 0.0;
    const __m256d ox = _mm256_set1_pd(xs[0]);
    const __m256d oy = _mm256_set1_pd(ys[0]);
    const std::size_t terms = n - 1;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= terms; j += 4) {
        const __m256d x1 = _mm256_sub_pd(_mm256_loadu_pd(xs + j), ox);
        const __m256d y1 = _mm256_sub_pd(_mm256_loadu_pd(ys + j), oy);
        const __m256d x2 = _mm256_sub_pd(_mm256_loadu_pd(xs + j + 1), ox);
        const __m256d y2 = _mm256_sub_pd(_mm256_loadu_pd(ys + j + 1), oy);
        acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_mul_pd(x1, y2), _mm256_mul_pd(x2, y1)));
    }
    double sum = hsum(acc);
    for (; j < terms; ++j) {
        const double x1 = xs[j] - xs[0], y1 = ys[j] - ys[0];
        const double x2 = xs[j + 1] - xs[0], y2 = ys[j + 1] - ys[0];
        sum += x1 * y2 - x2 * y1;
    }
    return sum;
}

double path_length(const double* xs, const double* ys, std::size_t n) {
    if (n < 2) return 0.0;
    const std::size_t terms = n - 1;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= terms; j += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j + 1), _mm256_loadu_pd(xs + j));
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j + 1), _mm256_loadu_pd(ys + j));
        acc = _mm256_add_pd(
            acc, _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy))));
    }
    double sum = hsum(acc);
    for (; j < terms; ++j) {
        const double dx = xs[j + 1] - xs[j];
        const double dy = ys[j + 1] - ys[j];
        sum += std::sqrt(dx * dx + dy * dy);
    }
    return sum;
}

}  // namespace genagent::kern::avx2

#endif  // GENAGENT_HAVE_AVX2_BACKEND
