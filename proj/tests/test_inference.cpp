#include "ajel/distributions.hpp"
#include "ajel/error.hpp"
#include "ajel/inference.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ajel;

namespace {

PseudoValueSet pv_of(std::vector<double> v) { return PseudoValueSet::from_values(std::move(v)); }

}  // namespace

TEST_CASE("two-point interval has a closed form") {
    // W(theta) = -2 ln(1 - theta^2) for pseudo-values {-1, 1}
    const double q = chi2_df1_quantile(0.95);
    const double edge = std::sqrt(-std::expm1(-q / 2.0));
    CHECK(edge == doctest::Approx(0.9238506023778497).epsilon(1e-14));

    const ConfidenceInterval ci = confidence_interval(pv_of({-1.0, 1.0}), 0.95, Method::jel);
    CHECK(std::fabs(ci.lower + edge) <= 1e-8);
    CHECK(std::fabs(ci.upper - edge) <= 1e-8);
    CHECK(ci.point_estimate == 0.0);
    CHECK_FALSE(ci.a_n.has_value());
    CHECK(ci.quantile == doctest::Approx(q));
}

TEST_CASE("endpoints solve W = q") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        const PseudoValueSet pv = pv_of(oracle::uniform_vector(rng, 10 + t, -1.0, 4.0));
        for (Method m : {Method::jel, Method::ajel}) {
            for (double level : {0.9, 0.95}) {
                const ConfidenceInterval ci = confidence_interval(pv, level, m);
                REQUIRE(std::isfinite(ci.lower));
                REQUIRE(std::isfinite(ci.upper));
                CHECK(ci.contains(pv.u_stat));
                CHECK(el_statistic(pv, ci.lower, m).statistic == doctest::Approx(ci.quantile).epsilon(1e-6));
                CHECK(el_statistic(pv, ci.upper, m).statistic == doctest::Approx(ci.quantile).epsilon(1e-6));
                CHECK_FALSE(ci.lower_search.at_hull_edge);
            }
        }
    }
}

TEST_CASE("intervals nest by level and AJEL contains JEL") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        const PseudoValueSet pv = pv_of(oracle::uniform_vector(rng, 6 + t, 0.0, 1.0));
        const ConfidenceInterval j90 = confidence_interval(pv, 0.90, Method::jel);
        const ConfidenceInterval j95 = confidence_interval(pv, 0.95, Method::jel);
        const ConfidenceInterval a90 = confidence_interval(pv, 0.90, Method::ajel);
        const ConfidenceInterval a95 = confidence_interval(pv, 0.95, Method::ajel);
        CHECK(j95.lower <= j90.lower);
        CHECK(j95.upper >= j90.upper);
        CHECK(a95.lower <= a90.lower);
        CHECK(a95.upper >= a90.upper);
        CHECK(a95.lower <= j95.lower + 1e-9);
        CHECK(a95.upper >= j95.upper - 1e-9);
        CHECK(a90.a_n.value() == doctest::Approx(default_a_n(pv.size())));
    }
}

TEST_CASE("intervals are equivariant under affine maps") {
    const std::vector<double> v{0.3, 1.1, -0.4, 2.2, 0.9, 1.4, 0.0};
    const ConfidenceInterval base = confidence_interval(pv_of(v), 0.95, Method::ajel);
    for (double c : {-3.0, 0.5, 1e4}) {
        std::vector<double> w = v;
        for (double& x : w) x = c * x + 7.0;
        const ConfidenceInterval ci = confidence_interval(pv_of(w), 0.95, Method::ajel);
        const double lo = c > 0 ? c * base.lower + 7.0 : c * base.upper + 7.0;
        const double hi = c > 0 ? c * base.upper + 7.0 : c * base.lower + 7.0;
        CHECK(ci.lower == doctest::Approx(lo).epsilon(1e-8));
        CHECK(ci.upper == doctest::Approx(hi).epsilon(1e-8));
    }
}

TEST_CASE("JEL interval stops at the hull") {
    // the upper edge is at the largest pseudo-value when the statistic stays finite below q
    const PseudoValueSet pv = pv_of({0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0});
    const ConfidenceInterval ci = confidence_interval(pv, 0.95, Method::jel);
    CHECK(ci.upper <= 1.0);
    CHECK(ci.lower >= 0.0);
}

TEST_CASE("AJEL interval is unbounded when the limit statistic is below the quantile") {
    const PseudoValueSet pv = pv_of({0.1, 0.5, 0.9});
    const double a = default_a_n(3);
    REQUIRE(ajel_statistic_at_infinity(3, a) < chi2_df1_quantile(0.95));
    const ConfidenceInterval ci = confidence_interval(pv, 0.95, Method::ajel);
    CHECK(std::isinf(ci.lower));
    CHECK(std::isinf(ci.upper));
    CHECK(ci.lower < 0);
    CHECK(ci.upper_search.unbounded);

    const ConfidenceInterval bounded = confidence_interval(pv, 0.95, Method::ajel, 0.05);
    REQUIRE(ajel_statistic_at_infinity(3, 0.05) > chi2_df1_quantile(0.95));
    CHECK(std::isfinite(bounded.lower));
    CHECK(std::isfinite(bounded.upper));
}

TEST_CASE("zero-spread pseudo-values give a degenerate interval") {
    for (Method m : {Method::jel, Method::ajel}) {
        const ConfidenceInterval ci = confidence_interval(pv_of({0.7, 0.7, 0.7, 0.7}), 0.9, m);
        CHECK(ci.degenerate);
        CHECK(ci.lower == 0.7);
        CHECK(ci.upper == 0.7);
        CHECK(ci.length() == 0.0);
    }
}

TEST_CASE("level and a_n are validated") {
    const PseudoValueSet pv = pv_of({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(confidence_interval(pv, 1.0, Method::jel), Error);
    CHECK_THROWS_AS(confidence_interval(pv, 0.0, Method::jel), Error);
    CHECK_THROWS_AS(confidence_interval(pv, 0.95, Method::ajel, -1.0), Error);
    CHECK_THROWS_AS(confidence_interval(pv, 0.95, Method::ajel, 0.0), Error);
}

TEST_CASE("test_theta") {
    const PseudoValueSet pv = pv_of({1.0, 1.0, 2.0});
    const TestResult j = test_theta(pv, 1.2, Method::jel);
    CHECK(j.statistic == doctest::Approx(0.29236502035616286).epsilon(1e-12));
    CHECK(j.p_value == doctest::Approx(chi2_df1_sf(j.statistic)));
    CHECK(j.status == ElStatus::converged);

    const TestResult out = test_theta(pv, 5.0, Method::jel);
    CHECK(out.status == ElStatus::outside_hull);
    CHECK(out.p_value == 0.0);

    const TestResult a = test_theta(pv, 5.0, Method::ajel, std::log(3.0) / 2.0);
    CHECK(a.statistic == doctest::Approx(2.5841096261156992).epsilon(1e-11));
    CHECK(a.p_value > 0.0);
    CHECK(a.a_n.value() == doctest::Approx(std::log(3.0) / 2.0));

    CHECK(test_theta(pv, pv.u_stat, Method::ajel).p_value == doctest::Approx(1.0));
    CHECK(to_string(Method::ajel) == "AJEL");
}
