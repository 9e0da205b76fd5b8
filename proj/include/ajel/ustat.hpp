#pragma once

#include "ajel/kernel.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace ajel {

struct OneSampleDesign {
    std::size_t n = 0;
    int m = 1;
};

struct TwoSampleDesign {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    int m1 = 1;
    int m2 = 1;
};

using Design = std::variant<OneSampleDesign, TwoSampleDesign>;

/// Jackknife pseudo-values V_i = n U_n - (n - 1) U_{n-1}^{(-i)} and U_n.
/// For two samples the pooled index runs over the first sample, then the
/// second, and n = n1 + n2.
struct PseudoValueSet {
    std::vector<double> values;
    double u_stat = 0.0;
    Design design;

    std::size_t size() const noexcept { return values.size(); }

    /// Wraps precomputed values as a degree-1 one-sample design; u_stat is
    /// their compensated mean.
    static PseudoValueSet from_values(std::vector<double> values);
};

enum class LeaveOneOut {
    automatic,  // cached kernel sums for m = 2 and (1,1) designs, identity for m = 1
    full,       // recompute every U_{n-1}^{(-i)} by enumeration
};

struct PseudoValueOptions {
    LeaveOneOut strategy = LeaveOneOut::automatic;
};

/// Averages the kernel over all m-subsets, enumerated lexicographically and
/// accumulated with compensated summation.
double eval_u_statistic(const Sample& sample, const Kernel& kernel);

/// Averages the kernel over every (m1-subset of x) x (m2-subset of y).
double eval_u_statistic_two(const Sample& x, const Sample& y, const Kernel& kernel);

PseudoValueSet jackknife_pseudo_values(const Sample& sample, const Kernel& kernel,
                                       PseudoValueOptions opts = {});

PseudoValueSet jackknife_pseudo_values(const Sample& x, const Sample& y, const Kernel& kernel,
                                       PseudoValueOptions opts = {});

/// Total observation count n (n1 + n2 for two samples).
std::size_t design_size(const Design& d) noexcept;

}  // namespace ajel
