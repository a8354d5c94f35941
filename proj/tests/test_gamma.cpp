#include "subdiff/gammafn.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace subdiff::math;
using testutil::rel_err;

TEST_CASE("gamma at reference points") {
    CHECK(rel_err(gamma_fn(0.5), std::sqrt(M_PI)) < 1e-14);
    CHECK(rel_err(gamma_fn(1.0), 1.0) < 1e-15);
    CHECK(rel_err(gamma_fn(5.0), 24.0) < 1e-15);
    CHECK(rel_err(gamma_fn(-0.5), -2.0 * std::sqrt(M_PI)) < 1e-14);
    CHECK(rel_err(gamma_fn(7.5), 1871.254305797788346) < 1e-13);
}

TEST_CASE("gamma poles throw") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(std::nan("")), std::domain_error);
}

TEST_CASE("reflection identity") {
    testutil::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        double x = rng.uniform(0.01, 0.99);
        double lhs = gamma_fn(x) * gamma_fn(1.0 - x);
        double rhs = M_PI / sin_pi(x);
        CHECK(rel_err(lhs, rhs) < 1e-13);
    }
}

TEST_CASE("rgamma vanishes at poles and matches 1/gamma elsewhere") {
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-7.0) == 0.0);
    CHECK(rel_err(rgamma(0.5), 1.0 / std::sqrt(M_PI)) < 1e-14);
    CHECK(rel_err(rgamma(-0.5), -0.5 / std::sqrt(M_PI)) < 1e-14);
    CHECK(rel_err(rgamma(-2.5), 1.0 / gamma_fn(-2.5)) < 1e-13);
    CHECK(rgamma(200.0) == 0.0); // 1/Gamma underflows
}

TEST_CASE("sin_pi and cos_pi are exact at half-integers") {
    CHECK(sin_pi(3.0) == 0.0);
    CHECK(sin_pi(-41.0) == 0.0);
    CHECK(sin_pi(0.5) == 1.0);
    CHECK(sin_pi(-0.5) == -1.0);
    CHECK(sin_pi(2.5) == 1.0);
    CHECK(cos_pi(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cos_pi(1.0) == -1.0);
    CHECK(cos_pi(2.0) == 1.0);
    // near-integer arguments keep full relative accuracy (compare on the
    // actual double, not the decimal literal)
    const double x = 1.0 + 1e-9;
    CHECK(rel_err(sin_pi(x), -std::sin(M_PI * (x - 1.0))) < 1e-13);
}

TEST_CASE("lgamma_signed carries the sign") {
    int sg = 0;
    double v = lgamma_signed(-0.5, sg);
    CHECK(sg == -1);
    CHECK(rel_err(std::exp(v), 2.0 * std::sqrt(M_PI)) < 1e-13);
    v = lgamma_signed(4.0, sg);
    CHECK(sg == 1);
    CHECK(rel_err(std::exp(v), 6.0) < 1e-13);
}
