#include <cmath>

#include "doctest.h"
#include "vgrowth/error.hpp"
#include "vgrowth/estimation.hpp"
#include "vgrowth/simulation.hpp"

using namespace vgrowth;

namespace {

SimConfig alpha_like() {
    SimConfig c;
    c.gammas = {1.86};
    c.initial = {0.997, 0.003};
    c.sequenced.assign(18, 3000);
    c.seed = 20201115;
    return c;
}

ErrorCode config_error(const SimConfig& c) {
    try {
        validate_config(c);
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

}  // namespace

TEST_CASE("simulation is a pure function of seed and replication") {
    const auto c = alpha_like();
    CHECK(simulate(c, 3) == simulate(c, 3));
    CHECK_FALSE(simulate(c, 3) == simulate(c, 4));
    auto other = c;
    other.seed += 1;
    CHECK_FALSE(simulate(c, 0) == simulate(other, 0));
    const auto s = simulate(c);
    CHECK(s.size() == 18);
    for (const auto& r : s) {
        CHECK(r.sequenced == 3000);
        CHECK(r.variant_count <= r.sequenced);
    }
}

TEST_CASE("expected proportions follow the recursion") {
    const auto c = alpha_like();
    const auto p = expected_proportions(c);
    REQUIRE(p.size() == 18);
    const double o0 = 0.003 / 0.997;
    for (std::size_t t = 0; t < p.size(); ++t) {
        const double odds = p[t][1] / p[t][0];
        CHECK(odds == doctest::Approx(o0 * std::pow(1.86, static_cast<double>(t + 1))).epsilon(1e-12));
    }
    const auto e = expected_counts(c);
    CHECK(e[17].counts[1] == std::llround(3000 * p[17][1]));
}

TEST_CASE("growth schedule fixes total cases") {
    auto c = alpha_like();
    c.growth.assign(18, 0.9);
    c.initial_cases = 1e6;
    const auto s = simulate(c);
    REQUIRE(s[0].total_cases.has_value());
    // numeraire grows by 0.9, variant by 0.9 * 1.86
    const double c1 = 1e6 * (0.997 * 0.9 + 0.003 * 0.9 * 1.86);
    CHECK(static_cast<double>(*s[0].total_cases) == doctest::Approx(c1).epsilon(1e-6));
    // never fewer cases than sequenced
    c.initial_cases = 10;
    for (const auto& r : simulate(c)) CHECK(*r.total_cases >= r.sequenced);
}

TEST_CASE("config validation") {
    auto c = alpha_like();
    c.initial = {0.5, 0.6};
    CHECK(config_error(c) == ErrorCode::InvalidConfig);
    c = alpha_like();
    c.gammas = {-1};
    CHECK(config_error(c) == ErrorCode::InvalidConfig);
    c = alpha_like();
    c.gammas = {1.5, 2.0};
    CHECK(config_error(c) == ErrorCode::InvalidConfig);
    c = alpha_like();
    c.sequenced = {};
    CHECK(config_error(c) == ErrorCode::InvalidConfig);
    c = alpha_like();
    c.growth = {1.0};
    CHECK(config_error(c) == ErrorCode::InvalidConfig);
    CHECK(config_error(alpha_like()) == ErrorCode::Ok);
}

TEST_CASE("parameter recovery on simulated data") {
    const auto r = recovery_report(alpha_like(), 50);
    CHECK(r.replications == 50);
    CHECK(r.failures == 0);
    CHECK(r.true_gamma == 1.86);
    CHECK(std::abs(r.relative_bias) < 0.01);
    CHECK(r.coverage >= 0.8);
    CHECK(r.estimates.size() == 50);
}
