#include <cmath>
#include <vector>

#include "doctest.h"
#include "vgrowth/data_model.hpp"
#include "vgrowth/error.hpp"
#include "vgrowth/estimation.hpp"
#include "vgrowth/forecasting.hpp"
#include "vgrowth/robust_inference.hpp"

using namespace vgrowth;

TEST_CASE("forecast band is the logistic image of predictor +- c sd") {
    const auto alpha = load_bundled("alpha");
    const auto f = fit(alpha);
    const auto v = fisher_information(alpha, f);
    const std::vector<double> h{1, 10, 25};
    const auto band = forecast(f, v, h, 2.0);
    REQUIRE(band.points.size() == 3);
    for (const auto& p : band.points) {
        const double eta = f.params.alpha + f.params.beta * p.t;
        const double sd = std::sqrt(v.matrix(0, 0) + 2 * p.t * v.matrix(0, 1) + p.t * p.t * v.matrix(1, 1));
        CHECK(p.predictor_sd == doctest::Approx(sd));
        CHECK(p.point == doctest::Approx(1 / (1 + std::exp(-eta))));
        CHECK(p.lower == doctest::Approx(1 / (1 + std::exp(-(eta - 2 * sd)))));
        CHECK(p.upper == doctest::Approx(1 / (1 + std::exp(-(eta + 2 * sd)))));
        CHECK(p.lower <= p.point);
        CHECK(p.point <= p.upper);
    }
}

TEST_CASE("c = 0 collapses the band; larger c widens it") {
    const auto alpha = load_bundled("alpha").slice(5, 8);
    const auto f = fit(alpha);
    const auto v = hac_sandwich(alpha, f, 3);
    const std::vector<double> h{9, 12};
    const auto zero = forecast(f, v, h, 0.0);
    for (const auto& p : zero.points) {
        CHECK(p.lower == p.point);
        CHECK(p.upper == p.point);
    }
    const auto two = forecast(f, v, h, 2.0);
    const auto four = forecast(f, v, h, 4.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        CHECK(four.points[i].upper - four.points[i].lower > two.points[i].upper - two.points[i].lower);
    }
    try {
        forecast(f, v, h, -1.0);
        FAIL("expected NegativeC");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeC);
    }
}
