#include "ajel/el_solver.hpp"

#include "ajel/error.hpp"
#include "ajel/simd/kernels.hpp"
#include "ajel/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ajel {
namespace {

constexpr int max_iterations = 200;
constexpr double newton_step_tol = 1e-13;  // dimensionless, lambda * max|g|
constexpr double bracket_tol = 1e-15;

void check_values(std::span<const double> g) {
    if (g.empty()) fail(ErrorKind::size, "empirical likelihood: empty value vector");
    for (double v : g) {
        if (!std::isfinite(v)) fail(ErrorKind::numeric, "empirical likelihood: non-finite value");
    }
}

}  // namespace

const char* to_string(ElStatus s) noexcept {
    switch (s) {
        case ElStatus::converged: return "converged";
        case ElStatus::outside_hull: return "outside-hull";
        case ElStatus::degenerate_zero_spread: return "degenerate-zero-spread";
    }
    return "unknown";
}

LambdaRoot solve_lambda(std::span<const double> g) {
    check_values(g);
    const auto [mn_it, mx_it] = std::minmax_element(g.begin(), g.end());
    const double gmin = *mn_it, gmax = *mx_it;
    const double gscale = std::max(std::fabs(gmin), std::fabs(gmax));

    if (gscale == 0.0) return {0.0, ElStatus::degenerate_zero_spread, 0};
    if (!(gmin < 0.0 && gmax > 0.0)) {
        return {std::numeric_limits<double>::quiet_NaN(), ElStatus::outside_hull, 0};
    }

    const simd::KernelTable& kt = simd::active();
    // f(a) > 0 > f(b); the edges -1/gmax and -1/gmin are where f is infinite.
    double a = -1.0 / gmax;
    double b = -1.0 / gmin;
    double lambda = 0.0;

    for (int it = 1; it <= max_iterations; ++it) {
        const simd::DualSums s = kt.dual_sums(g, lambda);
        if (!(s.min_denom > 0.0)) {
            // Rounding put lambda on an edge: shrink the bracket toward zero.
            (lambda > 0.0 ? b : a) = lambda;
        } else if (s.f > 0.0) {
            a = lambda;
        } else if (s.f < 0.0) {
            b = lambda;
        } else {
            return {lambda, ElStatus::converged, it};
        }

        const double scale = std::max(1.0, std::fabs(lambda) * gscale);
        if ((b - a) * gscale <= bracket_tol * scale) return {0.5 * (a + b), ElStatus::converged, it};

        double next = std::numeric_limits<double>::quiet_NaN();
        if (s.min_denom > 0.0 && s.fprime < 0.0) {
            const double step = -s.f / s.fprime;
            next = lambda + step;
            // Next to a pole the step shrinks with the distance to it.
            const bool settled = std::fabs(step) * gscale <= newton_step_tol * scale &&
                                 std::fabs(step) * gscale <= 1e-3 * s.min_denom;
            if (next > a && next < b && settled) {
                return {next, ElStatus::converged, it};
            }
        }
        lambda = (next > a && next < b) ? next : 0.5 * (a + b);
    }
    fail(ErrorKind::solver, "empirical likelihood: lambda iteration did not converge in " +
                                std::to_string(max_iterations) + " steps");
}

ElSolution el_solution(std::span<const double> g) {
    const LambdaRoot root = solve_lambda(g);
    ElSolution sol;
    sol.lambda = root.lambda;
    sol.status = root.status;
    sol.iterations = root.iterations;
    const std::size_t n = g.size();

    if (root.status == ElStatus::outside_hull) {
        sol.log_ratio = -std::numeric_limits<double>::infinity();
        sol.statistic = std::numeric_limits<double>::infinity();
        return sol;
    }
    if (root.status == ElStatus::degenerate_zero_spread) {
        sol.weights.assign(n, 1.0 / static_cast<double>(n));
        return sol;
    }

    sol.weights.resize(n);
    CompensatedSum log_sum, w_sum;
    for (std::size_t i = 0; i < n; ++i) {
        const double lg = root.lambda * g[i];
        sol.weights[i] = 1.0 / (static_cast<double>(n) * (1.0 + lg));
        w_sum.add(sol.weights[i]);
        log_sum.add(std::log1p(lg));
    }
    const double total = w_sum.value();
    for (double& w : sol.weights) w /= total;
    sol.log_ratio = std::min(0.0, -log_sum.value());
    sol.statistic = -2.0 * sol.log_ratio;
    return sol;
}

ElSolution jel_statistic(const PseudoValueSet& pv, double theta) {
    std::vector<double> g(pv.values.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = pv.values[i] - theta;
    return el_solution(g);
}

std::vector<double> ajel_centered(const PseudoValueSet& pv, double theta, double a_n) {
    if (!(a_n > 0.0) || !std::isfinite(a_n)) {
        fail(ErrorKind::parameter, "adjustment level a_n must be positive and finite");
    }
    const std::size_t n = pv.values.size();
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = pv.values[i] - theta;
    g[n] = -a_n * compensated_mean(std::span<const double>(g.data(), n));
    return g;
}

ElSolution ajel_statistic(const PseudoValueSet& pv, double theta, double a_n) {
    return el_solution(ajel_centered(pv, theta, a_n));
}

double default_a_n(std::size_t n) noexcept {
    return std::max(0.5 * std::log(static_cast<double>(n)), 1e-8);
}

double ajel_statistic_at_infinity(std::size_t n, double a_n) {
    // Centered values (-1 x n, a): lambda = (a - n) / (a (n + 1)).
    const double nn = static_cast<double>(n);
    const double a = a_n;
    return std::max(0.0, 2.0 * (nn * std::log(nn * (a + 1.0) / (a * (nn + 1.0))) +
                                std::log((a + 1.0) / (nn + 1.0))));
}

}  // namespace ajel
