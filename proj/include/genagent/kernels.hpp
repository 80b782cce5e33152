#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the geometry layer, in two interchangeable
// backends: a scalar reference and an AVX2 variant picked at runtime.
//
// Contract between backends:
//   - min_dist2_chains and max_chord_dev2 are bitwise identical across
//     backends (per-pair arithmetic uses one fixed IEEE op sequence; the
//     reductions are exact min/max).
//   - shoelace_sum and path_length may differ by reassociation of the final
//     sum only (bounded by a few ulp); equivalence tests pin this.
//
// Chains are point arrays in SoA form: n points define n-1 segments.
// Polygons pass their closed ring (first point repeated at the end).

namespace genagent::kern {

struct ChordDev {
    double dist2;       // squared distance to the chord segment
    std::size_t index;  // lowest index attaining it; npos when n == 0
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

namespace scalar {
double min_dist2_chains(const double* ax, const double* ay, std::size_t an,
                        const double* bx, const double* by, std::size_t bn);
ChordDev max_chord_dev2(const double* xs, const double* ys, std::size_t n,
                        double x0, double y0, double x1, double y1);
double shoelace_sum(const double* xs, const double* ys, std::size_t n);
double path_length(const double* xs, const double* ys, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define GENAGENT_HAVE_AVX2_BACKEND 1
namespace avx2 {
double min_dist2_chains(const double* ax, const double* ay, std::size_t an,
                        const double* bx, const double* by, std::size_t bn);
ChordDev max_chord_dev2(const double* xs, const double* ys, std::size_t n,
                        double x0, double y0, double x1, double y1);
double shoelace_sum(const double* xs, const double* ys, std::size_t n);
double path_length(const double* xs, const double* ys, std::size_t n);
}  // namespace avx2
#endif

// Dispatched entry points. The backend is chosen once per process: AVX2 when
// the CPU supports it, unless GENAGENT_KERNEL=scalar|avx2 overrides.
double min_dist2_chains(const double* ax, const double* ay, std::size_t an,
                        const double* bx, const double* by, std::size_t bn);
ChordDev max_chord_dev2(const double* xs, const double* ys, std::size_t n,
                        double x0, double y0, double x1, double y1);
double shoelace_sum(const double* xs, const double* ys, std::size_t n);
double path_length(const double* xs, const double* ys, std::size_t n);

std::string_view active_backend();  // "scalar" or "avx2"

}  // namespace genagent::kern
