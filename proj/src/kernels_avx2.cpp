#if defined(__x86_64__) || defined(_M_X64)

#include "gapstat/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace gapstat::kern {

double max_diff_avx2(const double* a, const double* b, std::size_t n) {
    const double ninf = -std::numeric_limits<double>::infinity();
    __m256d acc0 = _mm256_set1_pd(ninf);
    __m256d acc1 = _mm256_set1_pd(ninf);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_max_pd(acc0, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                 _mm256_loadu_pd(b + i)));
        acc1 = _mm256_max_pd(acc1, _mm256_sub_pd(_mm256_loadu_pd(a + i + 4),
                                                 _mm256_loadu_pd(b + i + 4)));
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_max_pd(acc0, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                 _mm256_loadu_pd(b + i)));
    }
    acc0 = _mm256_max_pd(acc0, acc1);
    __m128d lo = _mm256_castpd256_pd128(acc0);
    __m128d hi = _mm256_extractf128_pd(acc0, 1);
    lo = _mm_max_pd(lo, hi);
    double best = std::max(_mm_cvtsd_f64(lo),
                           _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        if (d > best) best = d;
    }
    return best;
}

} // namespace gapstat::kern

#endif
