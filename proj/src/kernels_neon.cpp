#if defined(__aarch64__)

#include "gapstat/kernels.hpp"

#include <arm_neon.h>

#include <algorithm>
#include <limits>

namespace gapstat::kern {

double max_diff_neon(const double* a, const double* b, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    float64x2_t acc0 = vdupq_n_f64(ninf);
    float64x2_t acc1 = vdupq_n_f64(ninf);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vmaxq_f64(acc0, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc1 = vmaxq_f64(acc1, vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    for (; i + 2 <= n; i += 2) {
        acc0 = vmaxq_f64(acc0, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    acc0 = vmaxq_f64(acc0, acc1);
    double best = std::max(vgetq_lane_f64(acc0, 0), vgetq_lane_f64(acc0, 1));
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        if (d > best) best = d;
    }
    return best;
}

} // namespace gapstat::kern

#endif
