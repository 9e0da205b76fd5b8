#pragma once

#include "ajel/ustat.hpp"

#include <span>
#include <vector>

namespace ajel {

enum class ElStatus {
    converged,
    outside_hull,            // 0 not strictly inside (min g, max g); statistic is +inf
    degenerate_zero_spread,  // every g_i == 0; statistic 0, uniform weights
};

const char* to_string(ElStatus s) noexcept;

struct LambdaRoot {
    double lambda = 0.0;  // NaN when status is outside_hull
    ElStatus status = ElStatus::converged;
    int iterations = 0;
};

/// Empirical-likelihood solution for centered values g_1..g_N:
/// maximize sum ln(N p_i) subject to sum p_i = 1, sum p_i g_i = 0.
struct ElSolution {
    double lambda = 0.0;
    std::vector<double> weights;  // empty when outside the hull
    double log_ratio = 0.0;       // -sum ln(1 + lambda g_i), <= 0
    double statistic = 0.0;       // -2 log_ratio, +inf outside the hull
    ElStatus status = ElStatus::converged;
    int iterations = 0;
};

/// Root of f(lambda) = sum g_i / (1 + lambda g_i) on (-1/max g, -1/min g).
///
/// f is strictly decreasing there and runs from +inf to -inf, so the root
/// is unique. Safeguarded Newton keeps a sign bracket and falls back to
/// bisection whenever a Newton step would leave it. Stops when f is zero to
/// within rounding of its terms or the bracket collapses to a few ulps.
LambdaRoot solve_lambda(std::span<const double> g);

ElSolution el_solution(std::span<const double> g);

/// JEL: g_i = V_i - theta.
ElSolution jel_statistic(const PseudoValueSet& pv, double theta);

/// AJEL: JEL values plus the point g_{n+1} = -a_n * mean(g_1..g_n), which
/// puts zero inside the hull whenever the mean is nonzero.
ElSolution ajel_statistic(const PseudoValueSet& pv, double theta, double a_n);

/// The centered vector solved by ajel_statistic (length n + 1).
std::vector<double> ajel_centered(const PseudoValueSet& pv, double theta, double a_n);

/// max(ln(n) / 2, 1e-8). Theory asks only that a_n grow slower than n^(2/3).
double default_a_n(std::size_t n) noexcept;

/// Limit of the AJEL statistic as |theta| -> inf, where the centered values
/// approach (-1, ..., -1, a_n) up to scale. Finite for every n and a_n.
double ajel_statistic_at_infinity(std::size_t n, double a_n);

}  // namespace ajel
