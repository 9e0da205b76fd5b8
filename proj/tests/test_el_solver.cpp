#include "ajel/el_solver.hpp"
#include "ajel/error.hpp"
#include "ajel/summation.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ajel;

namespace {

std::string status_name(ElStatus s) { return to_string(s); }

PseudoValueSet pv_of(std::vector<double> v) { return PseudoValueSet::from_values(std::move(v)); }

}  // namespace

TEST_CASE("g = [-1, 2] has lambda 1/4") {
    const std::vector<double> g{-1.0, 2.0};
    const ElSolution s = el_solution(g);
    CHECK(s.status == ElStatus::converged);
    CHECK(std::fabs(s.lambda - 0.25) <= 1e-12);
    CHECK(std::fabs(s.statistic - 0.2355660713127669) <= 1e-12);
    REQUIRE(s.weights.size() == 2);
    CHECK(s.weights[0] == doctest::Approx(2.0 / 3.0));
    CHECK(s.weights[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("boundary statuses") {
    CHECK(el_solution(std::vector<double>{1.0, 2.0, 3.0}).status == ElStatus::outside_hull);
    CHECK(std::isinf(el_solution(std::vector<double>{-1.0, -2.0}).statistic));
    CHECK(el_solution(std::vector<double>{0.0, 1.0}).status == ElStatus::outside_hull);
    CHECK(std::isnan(solve_lambda(std::vector<double>{0.0, 1.0}).lambda));
    const ElSolution z = el_solution(std::vector<double>{0.0, 0.0, 0.0});
    CHECK(z.status == ElStatus::degenerate_zero_spread);
    CHECK(z.statistic == 0.0);
    CHECK(z.lambda == 0.0);
    REQUIRE(z.weights.size() == 3);
    CHECK(z.weights[0] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(el_solution(std::vector<double>{}), Error);
    CHECK(status_name(ElStatus::outside_hull) == "outside-hull");
    CHECK(status_name(ElStatus::degenerate_zero_spread) == "degenerate-zero-spread");
}

TEST_CASE("solver agrees with the grid oracle on random vectors") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> len(2, 40);
    std::uniform_real_distribution<double> scale_exp(-6.0, 6.0);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> g = oracle::uniform_vector(rng, len(rng), -1.0, 1.0);
        if (t % 5 == 0) g.back() = 50.0;  // one heavy point
        const double s = std::pow(10.0, scale_exp(rng));
        for (double& v : g) v *= s;
        const ElSolution got = el_solution(g);
        const oracle::El want = oracle::empirical_likelihood(g);
        CAPTURE(t);
        CHECK(status_name(got.status) == oracle::to_string(want.status));
        if (want.status == oracle::Status::converged) {
            CHECK(std::fabs(got.statistic - want.statistic) <= 1e-8 * (1.0 + want.statistic));
            CHECK(got.lambda * s == doctest::Approx(want.lambda * s).epsilon(1e-6));
        }
    }
}

TEST_CASE("solution satisfies the constraints") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> g = oracle::uniform_vector(rng, 3 + t % 30, -1.0, 3.0);
        g[0] = -0.5;
        const ElSolution s = el_solution(g);
        REQUIRE(s.status == ElStatus::converged);
        CompensatedSum wsum, moment;
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(s.weights[i] > 0.0);
            wsum.add(s.weights[i]);
            moment.add(s.weights[i] * g[i]);
        }
        CHECK(wsum.value() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::fabs(moment.value()) <= 1e-12 * 3.0);
        CHECK(s.log_ratio <= 0.0);
        CHECK(s.statistic == doctest::Approx(-2.0 * s.log_ratio));
    }
}

TEST_CASE("statistic is scale invariant and symmetric under reflection") {
    const std::vector<double> g{-0.3, 1.2, -2.0, 0.7, 0.1};
    const double w = el_solution(g).statistic;
    for (double c : {1e-9, 1e-3, 7.0, 1e8}) {
        std::vector<double> h = g;
        for (double& v : h) v *= c;
        CHECK(el_solution(h).statistic == doctest::Approx(w).epsilon(1e-11));
        for (double& v : h) v = -v;
        CHECK(el_solution(h).statistic == doctest::Approx(w).epsilon(1e-11));
    }
}

TEST_CASE("JEL and AJEL examples") {
    const PseudoValueSet pv = pv_of({1.0, 1.0, 2.0});
    CHECK(pv.u_stat == doctest::Approx(4.0 / 3.0));

    const ElSolution j = jel_statistic(pv, 1.2);
    CHECK(j.status == ElStatus::converged);
    CHECK(j.lambda == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(j.statistic == doctest::Approx(0.29236502035616286).epsilon(1e-12));

    const double a = std::log(3.0) / 2.0;
    const ElSolution aj = ajel_statistic(pv, 1.2, a);
    CHECK(aj.lambda == doctest::Approx(0.6235726602942177).epsilon(1e-11));
    CHECK(aj.statistic == doctest::Approx(0.18309280483865561).epsilon(1e-11));

    CHECK(jel_statistic(pv, 5.0).status == ElStatus::outside_hull);
    const ElSolution far = ajel_statistic(pv, 5.0, a);
    CHECK(far.status == ElStatus::converged);
    CHECK(far.lambda == doctest::Approx(-0.30355953016460335).epsilon(1e-11));
    CHECK(far.statistic == doctest::Approx(2.5841096261156992).epsilon(1e-11));
    CHECK(far.weights.size() == 4);

    const auto c = ajel_centered(pv, 5.0, a);
    REQUIRE(c.size() == 4);
    CHECK(c[3] == doctest::Approx(-a * (4.0 / 3.0 - 5.0)));
}

TEST_CASE("AJEL at the point estimate is zero") {
    const PseudoValueSet pv = pv_of({0.2, 0.9, 0.4, 1.7});
    const ElSolution s = ajel_statistic(pv, pv.u_stat, 0.7);
    CHECK(s.statistic == doctest::Approx(0.0).epsilon(1e-20).scale(1e-12));
}

TEST_CASE("AJEL never exceeds JEL and both grow away from U_n") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 40; ++t) {
        const PseudoValueSet pv = pv_of(oracle::uniform_vector(rng, 5 + t, 0.0, 2.0));
        const double a = default_a_n(pv.size());
        double prev_j = 0.0, prev_a = 0.0;
        for (int k = 1; k <= 30; ++k) {
            const double theta = pv.u_stat + 0.03 * k;
            const double wj = jel_statistic(pv, theta).statistic;
            const double wa = ajel_statistic(pv, theta, a).statistic;
            CHECK(wa <= wj * (1.0 + 1e-9) + 1e-12);
            CHECK(wj >= prev_j - 1e-10);
            CHECK(wa >= prev_a - 1e-10);
            prev_j = wj;
            prev_a = wa;
        }
    }
}

TEST_CASE("default_a_n") {
    CHECK(default_a_n(20) == doctest::Approx(1.4978661367769955).epsilon(1e-15));
    CHECK(default_a_n(1) == 1e-8);
    CHECK(default_a_n(3) == doctest::Approx(std::log(3.0) / 2.0));
}

TEST_CASE("AJEL limit as theta grows") {
    for (std::size_t n : {3u, 10u, 20u, 65u}) {
        const double a = default_a_n(n);
        std::mt19937_64 rng(n);
        const PseudoValueSet pv = pv_of(oracle::uniform_vector(rng, n, 0.0, 1.0));
        const double limit = ajel_statistic_at_infinity(n, a);
        const double far = ajel_statistic(pv, 1e9, a).statistic;
        CAPTURE(n);
        CHECK(far == doctest::Approx(limit).epsilon(1e-6));
        const double far_neg = ajel_statistic(pv, -1e9, a).statistic;
        CHECK(far_neg == doctest::Approx(limit).epsilon(1e-6));
        // brute force: (-1, ..., -1, a) directly
        std::vector<double> g(n, -1.0);
        g.push_back(a);
        CHECK(el_solution(g).statistic == doctest::Approx(limit).epsilon(1e-10));
    }
}

TEST_CASE("Newton iterate next to a pole is not taken as converged") {
    // ties give pseudo-values within rounding of theta, so min g is far from the near-zero values
    std::vector<double> v(23, 1.038095238095238);
    for (double x : {0.76190476190476275, 0.76190476190476275, 0.62380952380952337, 0.62380952380952337,
                     0.89999999999999858, 0.89999999999999858, 0.48571428571428754})
        v.push_back(x);
    const ElSolution s = jel_statistic(pv_of(v), 0.9);
    CHECK(s.status == ElStatus::converged);
    CHECK(s.lambda == doctest::Approx(1.6118839499571549).epsilon(1e-12));
    CHECK(s.statistic == doctest::Approx(3.6772404134835616).epsilon(1e-12));
}
