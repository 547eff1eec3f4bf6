#include <cmath>
#include <random>

#include "doctest.h"
#include "vgrowth/dynamics.hpp"
#include "vgrowth/error.hpp"

using namespace vgrowth;

TEST_CASE("step_lambda matches the recursion") {
    CHECK(step_lambda(Proportion(0.1), Advantage(1.86, 7)).value() == doctest::Approx(0.17127071823204418).epsilon(1e-14));
    CHECK(step_lambda(Proportion(0.0), Advantage(3.0, 7)).value() == 0.0);
    CHECK(step_lambda(Proportion(1.0), Advantage(3.0, 7)).value() == 1.0);
    CHECK(step_lambda(Proportion(0.4), Advantage(1.0, 7)).value() == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("lambda_at closed form") {
    CHECK(lambda_at({-4.11, 0.244}, 0).value() == doctest::Approx(0.016142905374705203).epsilon(1e-12));
    CHECK(lambda_at({0.0, 1.0}, 0).value() == 0.5);
    CHECK(lambda_at({-800, 1.0}, 0).value() == 0.0);
    CHECK(lambda_at({800, 1.0}, 0).value() == 1.0);
}

TEST_CASE("iterated recursion agrees with the closed form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ua(-6, 2), ub(-1, 1.5);
    for (int rep = 0; rep < 200; ++rep) {
        const ModelParams p{ua(rng), ub(rng)};
        Proportion lam = lambda_at(p, 0);
        const Advantage g(std::exp(p.beta), 7);
        for (int t = 1; t <= 30; ++t) {
            lam = step_lambda(lam, g);
            CHECK(std::abs(lam.value() - lambda_at(p, t).value()) <= 1e-12);
        }
    }
}

TEST_CASE("odds and log-odds") {
    CHECK(odds(Proportion(0.25)) == doctest::Approx(1.0 / 3.0));
    CHECK(log_odds(Proportion(0.5)) == 0.0);
    CHECK_THROWS_AS(odds(Proportion(1.0)), Error);
    for (double p : {0.0, 1.0}) {
        try {
            log_odds(Proportion(p));
            FAIL("expected BoundaryOdds");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BoundaryOdds);
        }
    }
    for (double x : {-30.0, -2.5, 0.0, 0.7, 12.0}) {
        CHECK(log_odds(proportion_from_log_odds(x)) == doctest::Approx(x).epsilon(1e-9));
    }
    CHECK(proportion_from_odds(3.0).value() == doctest::Approx(0.75));
    CHECK(logistic(-1000) == 0.0);
    CHECK(logistic(1000) == 1.0);
    CHECK_THROWS_AS(Proportion(1.5), Error);
    CHECK_THROWS_AS(Proportion(-0.1), Error);
    CHECK_THROWS_AS(Proportion(std::nan("")), Error);
}

TEST_CASE("rescale_advantage") {
    CHECK(rescale_advantage(Advantage(1.86, 7), 4.7).value() == doctest::Approx(1.5169060767134828).epsilon(1e-6));
    CHECK(rescale_advantage(Advantage(1.28, 1), 7).value() == doctest::Approx(5.629499534213121).epsilon(1e-12));
    CHECK(rescale_advantage(Advantage(std::exp(0.244), 1), 7).value() ==
          doctest::Approx(5.517914605223447).epsilon(1e-12));
    // round trip
    const auto g = rescale_advantage(rescale_advantage(Advantage(2.3, 7), 3.1), 7);
    CHECK(g.value() == doctest::Approx(2.3).epsilon(1e-12));
    try {
        rescale_advantage(Advantage(2, 7), 0);
        FAIL("expected NonPositivePeriod");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositivePeriod);
    }
    CHECK_THROWS_AS(Advantage(2, -1), Error);
}
