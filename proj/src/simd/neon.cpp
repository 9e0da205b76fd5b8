#include "ajel/simd/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <algorithm>
#include <limits>

namespace ajel::simd::detail {
namespace {

void pair_max_row_sums(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    const double* px = x.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = px[i];
        const float64x2_t pivot = vdupq_n_f64(xi);
        float64x2_t acc0 = vdupq_n_f64(0.0);
        float64x2_t acc1 = vdupq_n_f64(0.0);
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            acc0 = vaddq_f64(acc0, vmaxq_f64(pivot, vld1q_f64(px + j)));
            acc1 = vaddq_f64(acc1, vmaxq_f64(pivot, vld1q_f64(px + j + 2)));
        }
        double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
        for (; j < n; ++j) acc += std::max(xi, px[j]);
        out[i] = acc - xi;
    }
}

CompareCounts compare_counts(double pivot, std::span<const double> values) {
    const std::size_t n = values.size();
    const double* pv = values.data();
    const float64x2_t p = vdupq_n_f64(pivot);
    uint64x2_t lt = vdupq_n_u64(0);
    uint64x2_t eq = vdupq_n_u64(0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const float64x2_t v = vld1q_f64(pv + j);
        // comparison lanes are all-ones (== -1 as signed); subtracting counts them
        lt = vsubq_u64(lt, vcltq_f64(v, p));
        eq = vsubq_u64(eq, vceqq_f64(v, p));
    }
    CompareCounts c;
    c.below = static_cast<std::int64_t>(vaddvq_u64(lt));
    c.equal = static_cast<std::int64_t>(vaddvq_u64(eq));
    for (; j < n; ++j) {
        c.below += pv[j] < pivot;
        c.equal += pv[j] == pivot;
    }
    return c;
}

DualSums dual_sums(std::span<const double> g, double lambda) {
    const std::size_t n = g.size();
    const double* pg = g.data();
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t lam = vdupq_n_f64(lambda);
    float64x2_t f = vdupq_n_f64(0.0);
    float64x2_t fp = vdupq_n_f64(0.0);
    float64x2_t mn = vdupq_n_f64(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t gi = vld1q_f64(pg + i);
        const float64x2_t d = vaddq_f64(one, vmulq_f64(lam, gi));
        const float64x2_t t = vdivq_f64(gi, d);
        f = vaddq_f64(f, t);
        fp = vaddq_f64(fp, vmulq_f64(t, t));
        mn = vminq_f64(mn, d);
    }
    DualSums s;
    s.f = vaddvq_f64(f);
    double sq = vaddvq_f64(fp);
    s.min_denom = vminvq_f64(mn);
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

const KernelTable* neon_table() noexcept {
    static const KernelTable t{&pair_max_row_sums, &compare_counts, &dual_sums};
    return &t;
}

}  // namespace ajel::simd::detail

#else

namespace ajel::simd::detail {
const KernelTable* neon_table() noexcept { return nullptr; }
}  // namespace ajel::simd::detail

#endif
