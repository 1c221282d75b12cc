// Compiled with -mavx2 (no -mfma, so multiply/subtract round separately and
// match the scalar kernels bit for bit).
#include "mdist/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <limits>

namespace mdist::simd {
namespace {

void sub_scaled(double* y, const double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        __m256d y1 = _mm256_loadu_pd(y + i + 4);
        y0 = _mm256_sub_pd(y0, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        y1 = _mm256_sub_pd(y1, _mm256_mul_pd(va, _mm256_loadu_pd(x + i + 4)));
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        y0 = _mm256_sub_pd(y0, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, y0);
    }
    for (; i < n; ++i) y[i] -= a * x[i];
}

void scale(double* y, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), va));
    for (; i < n; ++i) y[i] *= a;
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double sum(const double* x, std::size_t n) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        s0 = _mm256_add_pd(s0, _mm256_loadu_pd(x + i));
        s1 = _mm256_add_pd(s1, _mm256_loadu_pd(x + i + 4));
    }
    for (; i + 4 <= n; i += 4) s0 = _mm256_add_pd(s0, _mm256_loadu_pd(x + i));
    double s = hsum(_mm256_add_pd(s0, s1));
    for (; i < n; ++i) s += x[i];
    return s;
}

void accumulate_u8(std::int32_t* acc, const std::uint8_t* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(x + i));
        const __m256i wide = _mm256_cvtepu8_epi32(bytes);
        __m256i* dst = reinterpret_cast<__m256i*>(acc + i);
        _mm256_storeu_si256(dst, _mm256_add_epi32(_mm256_loadu_si256(dst), wide));
    }
    for (; i < n; ++i) acc[i] += x[i];
}

double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, sh));
}

double triangle_violation(const double* dp, const double* dq, double pq, std::size_t n) {
    const __m256d vpq = _mm256_set1_pd(pq);
    __m256d worst = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d a = _mm256_loadu_pd(dp + j);
        const __m256d b = _mm256_loadu_pd(dq + j);
        worst = _mm256_max_pd(worst, _mm256_sub_pd(_mm256_sub_pd(vpq, a), b));
        worst = _mm256_max_pd(worst, _mm256_sub_pd(_mm256_sub_pd(a, vpq), b));
        worst = _mm256_max_pd(worst, _mm256_sub_pd(_mm256_sub_pd(b, vpq), a));
    }
    double w = hmax(worst);
    for (; j < n; ++j) {
        w = std::max(w, pq - dp[j] - dq[j]);
        w = std::max(w, dp[j] - pq - dq[j]);
        w = std::max(w, dq[j] - pq - dp[j]);
    }
    return w;
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{Isa::avx2, sub_scaled, scale, sum, accumulate_u8,
                                   triangle_violation};
    return &table;
}

}  // namespace mdist::simd
