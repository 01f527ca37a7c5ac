#pragma once

#include <cstddef>

namespace gapstat::kern {

// max over i < n of a[i] - b[i]; -inf when n == 0.
// a[i] may be -inf and b[i] may be +inf (never the reverse), so differences are
// finite or -inf and no NaN can appear. All variants return bit-identical
// results: subtraction is elementwise and max is exact, so reduction order
// cannot change the value.
using MaxDiffFn = double (*)(const double* a, const double* b, std::size_t n);

double max_diff_scalar(const double* a, const double* b, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
double max_diff_avx2(const double* a, const double* b, std::size_t n);
#endif
#if defined(__aarch64__)
double max_diff_neon(const double* a, const double* b, std::size_t n);
#endif

const char* active_kernel_name();
MaxDiffFn active_kernel();

inline double max_diff(const double* a, const double* b, std::size_t n) {
    return active_kernel()(a, b, n);
}

} // namespace gapstat::kern
