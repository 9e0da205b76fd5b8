#include "ajel/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <limits>

// Compiled for the baseline target; the AVX2 bodies carry a target attribute
// and are only reached after the cpuid check in dispatch.cpp. FMA is left out
// so products round the same way as in the scalar reference.
#define AJEL_AVX2 __attribute__((target("avx2")))

namespace ajel::simd::detail {
namespace {

AJEL_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

AJEL_AVX2 inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

AJEL_AVX2 void pair_max_row_sums(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    const double* px = x.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = px[i];
        const __m256d pivot = _mm256_set1_pd(xi);
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 8 <= n; j += 8) {
            acc0 = _mm256_add_pd(acc0, _mm256_max_pd(pivot, _mm256_loadu_pd(px + j)));
            acc1 = _mm256_add_pd(acc1, _mm256_max_pd(pivot, _mm256_loadu_pd(px + j + 4)));
        }
        for (; j + 4 <= n; j += 4) {
            acc0 = _mm256_add_pd(acc0, _mm256_max_pd(pivot, _mm256_loadu_pd(px + j)));
        }
        double acc = hsum(_mm256_add_pd(acc0, acc1));
        for (; j < n; ++j) acc += std::max(xi, px[j]);
        out[i] = acc - xi;
    }
}

AJEL_AVX2 CompareCounts compare_counts(double pivot, std::span<const double> values) {
    const std::size_t n = values.size();
    const double* pv = values.data();
    const __m256d p = _mm256_set1_pd(pivot);
    CompareCounts c;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d v = _mm256_loadu_pd(pv + j);
        const int lt = _mm256_movemask_pd(_mm256_cmp_pd(v, p, _CMP_LT_OQ));
        const int eq = _mm256_movemask_pd(_mm256_cmp_pd(v, p, _CMP_EQ_OQ));
        c.below += std::popcount(static_cast<unsigned>(lt));
        c.equal += std::popcount(static_cast<unsigned>(eq));
    }
    for (; j < n; ++j) {
        c.below += pv[j] < pivot;
        c.equal += pv[j] == pivot;
    }
    return c;
}

AJEL_AVX2 DualSums dual_sums(std::span<const double> g, double lambda) {
    const std::size_t n = g.size();
    const double* pg = g.data();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d lam = _mm256_set1_pd(lambda);
    __m256d f = _mm256_setzero_pd();
    __m256d fp = _mm256_setzero_pd();
    __m256d mn = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gi = _mm256_loadu_pd(pg + i);
        const __m256d d = _mm256_add_pd(one, _mm256_mul_pd(lam, gi));
        const __m256d t = _mm256_div_pd(gi, d);
        f = _mm256_add_pd(f, t);
        fp = _mm256_add_pd(fp, _mm256_mul_pd(t, t));
        mn = _mm256_min_pd(mn, d);
    }
    DualSums s;
    s.f = hsum(f);
    double sq = hsum(fp);
    s.min_denom = hmin(mn);
    for (; i < n; ++i) {
        const double d = 1.0 + lambda * pg[i];
        const double t = pg[i] / d;
        s.f += t;
        sq += t * t;
        s.min_denom = std::min(s.min_denom, d);
    }
    s.fprime = -sq;
    return s;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
    static const KernelTable t{&pair_max_row_sums, &compare_counts, &dual_sums};
    return &t;
}

}  // namespace ajel::simd::detail

#else

namespace ajel::simd::detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
}  // namespace ajel::simd::detail

#endif
