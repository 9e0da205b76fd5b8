#pragma once

// Reference computations for tests. Deliberately naive and independent of
// the library's solver, fast paths and SIMD kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oracle {

enum class Status { converged, outside_hull, degenerate };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::converged: return "converged";
        case Status::outside_hull: return "outside-hull";
        case Status::degenerate: return "degenerate-zero-spread";
    }
    return "?";
}

struct El {
    double lambda = 0.0;
    double statistic = 0.0;
    Status status = Status::converged;
};

// Dual of the EL problem: scan a dense lambda grid over the admissible
// interval for the sign change of f(lambda) = sum g / (1 + lambda g), then
// bisect in long double.
inline El empirical_likelihood(const std::vector<double>& g, int grid = 4096) {
    const double lo = *std::min_element(g.begin(), g.end());
    const double hi = *std::max_element(g.begin(), g.end());
    if (lo == 0.0 && hi == 0.0) return {0.0, 0.0, Status::degenerate};
    if (!(lo < 0.0 && hi > 0.0)) return {std::nan(""), std::numeric_limits<double>::infinity(), Status::outside_hull};

    auto f = [&](long double l) {
        long double s = 0.0L;
        for (double x : g) s += x / (1.0L + l * x);
        return s;
    };
    const long double a0 = -1.0L / hi, b0 = -1.0L / lo;
    long double a = a0, b = b0;
    // first grid point with f < 0 bounds the root from above
    for (int k = 1; k < grid; ++k) {
        const long double l = a0 + (b0 - a0) * k / grid;
        if (f(l) < 0) {
            b = l;
            a = a0 + (b0 - a0) * (k - 1) / grid;
            break;
        }
    }
    for (int it = 0; it < 400; ++it) {
        const long double m = 0.5L * (a + b);
        if (m == a || m == b) break;
        (f(m) > 0 ? a : b) = m;
    }
    const long double l = 0.5L * (a + b);
    long double w = 0.0L;
    for (double x : g) w += 2.0L * std::log1p(static_cast<double>(l * x));
    return {static_cast<double>(l), static_cast<double>(std::max(w, 0.0L)), Status::converged};
}

// Explicit U-statistic of degree 2 over a list of values.
inline double u2(const std::vector<double>& x, const std::function<double(double, double)>& h) {
    long double s = 0.0L;
    std::size_t c = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            s += h(x[i], x[j]);
            ++c;
        }
    }
    return static_cast<double>(s / c);
}

// Explicit two-sample (1,1) U-statistic.
inline double u11(const std::vector<double>& x, const std::vector<double>& y,
                  const std::function<double(double, double)>& h) {
    long double s = 0.0L;
    for (double a : x) {
        for (double b : y) s += h(a, b);
    }
    return static_cast<double>(s / (x.size() * y.size()));
}

inline std::vector<double> drop(std::vector<double> v, std::size_t i) {
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    return v;
}

// V_i = n U_n - (n - 1) U_{n-1}^{(-i)} by literal deletion.
inline std::vector<double> pseudo_values_u2(const std::vector<double>& x,
                                            const std::function<double(double, double)>& h) {
    const double n = static_cast<double>(x.size());
    const double u = u2(x, h);
    std::vector<double> v;
    for (std::size_t i = 0; i < x.size(); ++i) v.push_back(n * u - (n - 1) * u2(drop(x, i), h));
    return v;
}

inline std::vector<double> pseudo_values_u11(const std::vector<double>& x, const std::vector<double>& y,
                                             const std::function<double(double, double)>& h) {
    const double n = static_cast<double>(x.size() + y.size());
    const double u = u11(x, y, h);
    std::vector<double> v;
    for (std::size_t i = 0; i < x.size(); ++i) v.push_back(n * u - (n - 1) * u11(drop(x, i), y, h));
    for (std::size_t j = 0; j < y.size(); ++j) v.push_back(n * u - (n - 1) * u11(x, drop(y, j), h));
    return v;
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = d(rng);
    return v;
}

}  // namespace oracle
