#include "genagent/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace genagent::kern {

namespace {

struct Backend {
    double (*min_dist2)(const double*, const double*, std::size_t, const double*, const double*,
                        std::size_t);
    ChordDev (*chord)(const double*, const double*, std::size_t, double, double, double, double);
    double (*shoelace)(const double*, const double*, std::size_t);
    double (*length)(const double*, const double*, std::size_t);
    std::string_view name;
};

constexpr Backend kScalar{&scalar::min_dist2_chains, &scalar::max_chord_dev2,
                          &scalar::shoelace_sum, &scalar::path_length, "scalar"};

#if GENAGENT_HAVE_AVX2_BACKEND
constexpr Backend kAvx2{&avx2::min_dist2_chains, &avx2::max_chord_dev2, &avx2::shoelace_sum,
                        &avx2::path_length, "avx2"};
#endif

const Backend& backend() {
    static const Backend chosen = [] {
#if GENAGENT_HAVE_AVX2_BACKEND
        const char* env = std::getenv("GENAGENT_KERNEL");
        const std::string_view want = env ? env : "";
        if (want == "scalar") return kScalar;
        if (want == "avx2") return kAvx2;
        if (__builtin_cpu_supports("avx2")) return kAvx2;
#endif
        return kScalar;
    }();
    return chosen;
}

}  // namespace

double min_dist2_chains(const double* ax, const double* ay, std::size_t an, const double* bx,
                        const double* by, std::size_t bn) {
    return backend().min_dist2(ax, ay, an, bx, by, bn);
}

ChordDev max_chord_dev2(const double* xs, const double* ys, std::size_t n, double x0, double y0,
                        double x1, double y1) {
    return backend().chord(xs, ys, n, x0, y0, x1, y1);
}

double shoelace_sum(const double* xs, const double* ys, std::size_t n) {
    return backend().shoelace(xs, ys, n);
}

double path_length(const double* xs, const double* ys, std::size_t n) {
    return backend().length(xs, ys, n);
}

std::string_view active_backend() { return backend().name; }

}  // namespace genagent::kern
