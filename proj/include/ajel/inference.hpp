#pragma once

#include "ajel/el_solver.hpp"
#include "ajel/ustat.hpp"

#include <optional>
#include <string_view>

namespace ajel {

enum class Method { jel, ajel };

std::string_view to_string(Method m) noexcept;

/// -2 log empirical likelihood ratio at theta. For AJEL, a_n defaults to
/// default_a_n(pv.size()).
ElSolution el_statistic(const PseudoValueSet& pv, double theta, Method method,
                        std::optional<double> a_n = std::nullopt);

struct EndpointSearch {
    int expansions = 0;
    int bisections = 0;
    bool at_hull_edge = false;  // statistic jumped to +inf before reaching the quantile
    bool unbounded = false;     // AJEL statistic stays below the quantile as theta -> inf
};

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    Method method = Method::ajel;
    double point_estimate = 0.0;
    std::optional<double> a_n;  // set for AJEL
    double quantile = 0.0;      // chi-square(1) quantile the endpoints solve for
    bool degenerate = false;    // zero-spread pseudo-values: [U_n, U_n]
    EndpointSearch lower_search;
    EndpointSearch upper_search;

    double length() const noexcept { return upper - lower; }
    bool contains(double theta) const noexcept { return lower <= theta && theta <= upper; }
};

/// Wilks-calibrated interval {theta : W(theta) <= chi2_1 quantile(level)}.
///
/// Each endpoint is found by doubling a step outward from U_n until the
/// statistic reaches the quantile (+inf counts as reached), then bisecting.
/// The initial step is max(sd(V) / sqrt(n), 1e-8 (1 + |U_n|)).
ConfidenceInterval confidence_interval(const PseudoValueSet& pv, double level, Method method,
                                       std::optional<double> a_n = std::nullopt);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    double theta0 = 0.0;
    Method method = Method::ajel;
    std::optional<double> a_n;
    ElStatus status = ElStatus::converged;
};

TestResult test_theta(const PseudoValueSet& pv, double theta0, Method method,
                      std::optional<double> a_n = std::nullopt);

}  // namespace ajel
