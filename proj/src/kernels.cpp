#include "gapstat/kernels.hpp"

#include <algorithm>
#include <limits>

namespace gapstat::kern {

double max_diff_scalar(const double* a, const double* b, std::size_t n) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        if (d > best) best = d;
    }
    return best;
}

namespace {

MaxDiffFn resolve() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return &max_diff_avx2;
#endif
#if defined(__aarch64__)
    return &max_diff_neon;
#endif
    return &max_diff_scalar;
}

} // namespace

MaxDiffFn active_kernel() {
    static const MaxDiffFn fn = resolve();
    return fn;
}

const char* active_kernel_name() {
    MaxDiffFn fn = active_kernel();
#if defined(__x86_64__) || defined(_M_X64)
    if (fn == &max_diff_avx2) return "avx2";
#endif
#if defined(__aarch64__)
    if (fn == &max_diff_neon) return "neon";
#endif
    return "scalar";
}

} // namespace gapstat::kern
