#pragma once

// Data-parallel inner loops behind the U-statistic fast paths and the
// empirical-likelihood dual. Each routine has a scalar reference version
// and, where the host supports it, a vectorized version selected once at
// startup. The vectorized versions must agree with the reference:
// counts exactly, floating sums to a few ulps of the summands' magnitude.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ajel::simd {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b) noexcept;

/// Backend chosen at startup: the widest one the CPU supports, unless the
/// AJEL_SIMD environment variable names "scalar".
Backend active_backend() noexcept;

/// Overrides the active backend (tests, benchmarks). Requesting an
/// unsupported backend falls back to scalar. Returns the backend in effect.
Backend set_backend(Backend b) noexcept;

bool backend_supported(Backend b) noexcept;

struct CompareCounts {
    std::int64_t below = 0;  // values < pivot
    std::int64_t equal = 0;  // values == pivot
};

struct DualSums {
    double f = 0.0;        // sum g / (1 + lambda g)
    double fprime = 0.0;   // -sum (g / (1 + lambda g))^2
    double min_denom = 0;  // min (1 + lambda g)
};

// Function table for one backend.
struct KernelTable {
    // out[i] = sum over j != i of max(x[i], x[j])
    void (*pair_max_row_sums)(std::span<const double> x, std::span<double> out);
    CompareCounts (*compare_counts)(double pivot, std::span<const double> values);
    DualSums (*dual_sums)(std::span<const double> g, double lambda);
};

const KernelTable& table(Backend b) noexcept;

inline const KernelTable& active() noexcept { return table(active_backend()); }

namespace detail {
const KernelTable& scalar_table() noexcept;
const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in
const KernelTable* neon_table() noexcept;  // nullptr when not compiled in
}  // namespace detail

}  // namespace ajel::simd
