#include "ajel/inference.hpp"

#include "ajel/distributions.hpp"
#include "ajel/error.hpp"
#include "ajel/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ajel {
namespace {

constexpr int max_expansions = 200;
constexpr int max_bisections = 200;
constexpr double endpoint_tol = 1e-10;  // on |W - q|
constexpr double inf = std::numeric_limits<double>::infinity();

double resolve_a_n(const PseudoValueSet& pv, Method method, std::optional<double> a_n) {
    if (method == Method::jel) return 0.0;
    if (a_n) {
        if (!(*a_n > 0.0) || !std::isfinite(*a_n)) {
            fail(ErrorKind::parameter, "adjustment level a_n must be positive and finite");
        }
        return *a_n;
    }
    return default_a_n(pv.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double mean = compensated_mean(v);
    CompensatedSum ss;
    for (double x : v) ss.add((x - mean) * (x - mean));
    return std::sqrt(ss.value() / static_cast<double>(v.size() - 1));
}

struct Endpoint {
    double theta;
    EndpointSearch search;
};

// Outward search from the point estimate along dir (+1 / -1).
template <class Stat>
Endpoint find_endpoint(Stat&& stat, double center, double dir, double step0, double q, double spread) {
    EndpointSearch info;
    double inner = center;
    double outer = center;
    double w_outer = 0.0;
    for (;;) {
        if (info.expansions == max_expansions) {
            fail(ErrorKind::solver, "confidence interval: statistic stayed below the quantile after " +
                                        std::to_string(max_expansions) + " step doublings");
        }
        outer = center + dir * std::ldexp(step0, info.expansions);
        ++info.expansions;
        w_outer = stat(outer);
        if (w_outer >= q) break;
        inner = outer;
    }

    double w_inner = stat(inner);
    const double width_tol = 4.0 * std::numeric_limits<double>::epsilon() *
                             std::max({std::fabs(inner), std::fabs(outer), spread});
    while (info.bisections < max_bisections && std::fabs(outer - inner) > width_tol) {
        const double mid = 0.5 * (inner + outer);
        const double w = stat(mid);
        ++info.bisections;
        if (w >= q) {
            outer = mid;
            w_outer = w;
        } else {
            inner = mid;
            w_inner = w;
        }
        if (std::fabs(w - q) <= endpoint_tol) return {mid, info};
    }

    if (std::isinf(w_outer) && q - w_inner > 1e-6) {
        info.at_hull_edge = true;
        return {inner, info};
    }
    return {std::fabs(w_outer - q) < std::fabs(q - w_inner) ? outer : inner, info};
}

}  // namespace

std::string_view to_string(Method m) noexcept { return m == Method::jel ? "JEL" : "AJEL"; }

ElSolution el_statistic(const PseudoValueSet& pv, double theta, Method method, std::optional<double> a_n) {
    if (method == Method::jel) return jel_statistic(pv, theta);
    return ajel_statistic(pv, theta, resolve_a_n(pv, method, a_n));
}

ConfidenceInterval confidence_interval(const PseudoValueSet& pv, double level, Method method,
                                       std::optional<double> a_n) {
    if (!(level > 0.0 && level < 1.0)) fail(ErrorKind::parameter, "confidence level must lie in (0, 1)");
    if (pv.values.empty()) fail(ErrorKind::size, "confidence interval: no pseudo-values");

    ConfidenceInterval ci;
    ci.level = level;
    ci.method = method;
    ci.point_estimate = pv.u_stat;
    ci.quantile = chi2_df1_quantile(level);
    const double an = resolve_a_n(pv, method, a_n);
    if (method == Method::ajel) ci.a_n = an;

    const auto [mn, mx] = std::minmax_element(pv.values.begin(), pv.values.end());
    const double spread = *mx - *mn;
    if (spread == 0.0) {
        ci.lower = ci.upper = pv.u_stat;
        ci.degenerate = true;
        return ci;
    }

    const double n = static_cast<double>(pv.size());
    const double step0 = std::max(sample_sd(pv.values) / std::sqrt(n), 1e-8 * (1.0 + std::fabs(pv.u_stat)));
    auto stat = [&](double theta) {
        return method == Method::jel ? jel_statistic(pv, theta).statistic
                                     : ajel_statistic(pv, theta, an).statistic;
    };

    // The AJEL statistic is bounded in theta; when its limit does not reach
    // the quantile the interval is unbounded on both sides.
    const bool unbounded = method == Method::ajel && ajel_statistic_at_infinity(pv.size(), an) <= ci.quantile;
    if (unbounded) {
        ci.lower = -inf;
        ci.upper = inf;
        ci.lower_search.unbounded = ci.upper_search.unbounded = true;
        return ci;
    }

    const Endpoint lo = find_endpoint(stat, pv.u_stat, -1.0, step0, ci.quantile, spread);
    const Endpoint hi = find_endpoint(stat, pv.u_stat, +1.0, step0, ci.quantile, spread);
    ci.lower = lo.theta;
    ci.upper = hi.theta;
    ci.lower_search = lo.search;
    ci.upper_search = hi.search;
    return ci;
}

TestResult test_theta(const PseudoValueSet& pv, double theta0, Method method, std::optional<double> a_n) {
    TestResult r;
    r.theta0 = theta0;
    r.method = method;
    const double an = resolve_a_n(pv, method, a_n);
    if (method == Method::ajel) r.a_n = an;
    const ElSolution sol = method == Method::jel ? jel_statistic(pv, theta0) : ajel_statistic(pv, theta0, an);
    r.statistic = sol.statistic;
    r.status = sol.status;
    r.p_value = chi2_df1_sf(sol.statistic);
    return r;
}

}  // namespace ajel
