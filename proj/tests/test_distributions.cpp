#include "ajel/distributions.hpp"
#include "ajel/error.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <doctest.h>

#include <cmath>
#include <limits>

using namespace ajel;

TEST_CASE("normal quantile matches boost across the unit interval") {
    const boost::math::normal_distribution<double> z;
    for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 0.001, 0.01, 0.025, 0.05, 0.1, 0.2, 0.3, 0.425,
                     0.45, 0.5, 0.55, 0.6, 0.75, 0.9, 0.95, 0.975, 0.99, 0.999, 1.0 - 1e-10}) {
        CAPTURE(p);
        CHECK(normal_quantile(p) == doctest::Approx(boost::math::quantile(z, p)).epsilon(1e-14));
    }
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK_THROWS_AS(normal_quantile(0.0), ajel::Error);
    CHECK_THROWS_AS(normal_quantile(1.0), ajel::Error);
    CHECK_THROWS_AS(normal_quantile(1.5), ajel::Error);
}

TEST_CASE("chi-square(1) quantiles") {
    CHECK(chi2_df1_quantile(0.95) == doctest::Approx(3.8414588206941260).epsilon(1e-14));
    CHECK(chi2_df1_quantile(0.90) == doctest::Approx(2.7055434540954146).epsilon(1e-14));
    const boost::math::chi_squared_distribution<double> chi(1.0);
    for (double p : {1e-8, 0.01, 0.1, 0.5, 0.8, 0.99, 0.999999}) {
        CAPTURE(p);
        CHECK(chi2_df1_quantile(p) == doctest::Approx(boost::math::quantile(chi, p)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(chi2_df1_quantile(0.0), ajel::Error);
    CHECK_THROWS_AS(chi2_df1_quantile(1.0), ajel::Error);
}

TEST_CASE("chi-square(1) cdf and survival") {
    const boost::math::chi_squared_distribution<double> chi(1.0);
    for (double x : {1e-6, 0.01, 0.5, 1.0, 2.7, 3.84, 10.0, 50.0}) {
        CAPTURE(x);
        CHECK(chi2_df1_cdf(x) == doctest::Approx(boost::math::cdf(chi, x)).epsilon(1e-14));
        CHECK(chi2_df1_sf(x) == doctest::Approx(boost::math::cdf(boost::math::complement(chi, x))).epsilon(1e-12));
    }
    CHECK(chi2_df1_cdf(0.0) == 0.0);
    CHECK_THROWS_AS(chi2_df1_cdf(-1.0), ajel::Error);
    CHECK(chi2_df1_cdf(std::numeric_limits<double>::infinity()) == 1.0);
    CHECK(chi2_df1_sf(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(chi2_df1_cdf(3.841459) == doctest::Approx(0.9500000053468).epsilon(1e-12));
}

TEST_CASE("quantile and cdf round trip") {
    for (double p = 0.001; p < 1.0; p += 0.0173) {
        CHECK(chi2_df1_cdf(chi2_df1_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
    }
}
