#include "ajel/simd/kernels.hpp"

#include <algorithm>
#include <limits>

namespace ajel::simd::detail {
namespace {

void pair_max_row_sums(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += std::max(xi, x[j]);
        out[i] = acc - xi;  // drop the j == i term
    }
}

CompareCounts compare_counts(double pivot, std::span<const double> values) {
    CompareCounts c;
    for (double v : values) {
        c.below += v < pivot;
        c.equal += v == pivot;
    }
    return c;
}

DualSums dual_sums(std::span<const double> g, double lambda) {
    DualSums s;
    s.min_denom = std::numeric_limits<double>::infinity();
    for (double gi : g) {
        const double d = 1.0 + lambda * gi;
        const double t = gi / d;
        s.f += t;
        s.fprime -= t * t;
        s.min_denom = std::min(s.min_denom, d);
    }
    return s;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
    static const KernelTable t{&pair_max_row_sums, &compare_counts, &dual_sums};
    return t;
}

}  // namespace ajel::simd::detail
