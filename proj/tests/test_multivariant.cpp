#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "vgrowth/error.hpp"
#include "vgrowth/estimation.hpp"
#include "vgrowth/multivariant.hpp"
#include "vgrowth/robust_inference.hpp"
#include "vgrowth/simulation.hpp"

using namespace vgrowth;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

MultiSeries three_variant_expected() {
    SimConfig c;
    c.gammas = {1.4, 2.1};
    c.initial = {0.97, 0.025, 0.005};
    c.sequenced.assign(14, 100'000'000);
    return expected_counts(c);
}

}  // namespace

TEST_CASE("multi recursion agrees with the softmax closed form") {
    const MultiParams p{{-3.0, -5.0}, {0.3, 0.8}};
    auto lam = lambdas_at(p, 0);
    double sum = 0;
    for (double v : lam) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    const auto g = p.gammas();
    for (int t = 1; t <= 20; ++t) {
        lam = step_lambda_multi(lam, g);
        const auto closed = lambdas_at(p, t);
        for (std::size_t j = 0; j < lam.size(); ++j) CHECK(std::abs(lam[j] - closed[j]) <= 1e-12);
    }
    CHECK(MultiParams::unpack(p.packed()).alphas == p.alphas);
    CHECK(MultiParams::unpack(p.packed()).betas == p.betas);
}

TEST_CASE("two-variant multinomial fit equals the binomial fit") {
    for (const char* name : {"alpha", "delta", "omicron"}) {
        const auto s = load_bundled(name);
        const auto b = fit(s);
        const auto m = fit_multi(to_multi(s));
        CHECK(std::abs(m.params.alphas[0] - b.params.alpha) <= 1e-8);
        CHECK(std::abs(m.params.betas[0] - b.params.beta) <= 1e-8);
        CHECK(m.log_likelihood == doctest::Approx(b.log_likelihood));
        const auto vb = hac_sandwich(s, b, 2);
        const auto vm = multi_variance(to_multi(s), m, VarianceKind::sandwich(2));
        CHECK((vb.matrix - vm.matrix).cwiseAbs().maxCoeff() <= 1e-8 * vb.matrix.cwiseAbs().maxCoeff());
        const auto gb = interval_for_gamma(vb, b, 4.7);
        const auto gm = interval_for_multi_gamma(vm, m, 1, 4.7);
        CHECK(gm.ci_low == doctest::Approx(gb.ci_low).epsilon(1e-7));
        CHECK(gm.ci_high == doctest::Approx(gb.ci_high).epsilon(1e-7));
        CHECK(gm.gamma.period_days() == 4.7);
        CHECK(code_of([&] { interval_for_multi_gamma(vm, m, 2, 4.7); }) == ErrorCode::InvalidIndex);
        CHECK(code_of([&] { interval_for_multi_gamma(vm, m, 0, 4.7); }) == ErrorCode::InvalidIndex);
    }
}

TEST_CASE("multi score and Hessian match finite differences") {
    std::mt19937_64 rng(12);
    SimConfig c;
    c.gammas = {1.3, 1.9};
    c.initial = {0.9, 0.07, 0.03};
    c.sequenced.assign(10, 800);
    c.seed = 99;
    const auto s = simulate_multi(c);
    const MultiParams p{{-2.0, -3.5}, {0.2, 0.5}};
    const auto g = multi_score(s, p);
    const auto h = multi_hessian(s, p);
    const Eigen::VectorXd theta = p.packed();
    const double eps = 1e-5;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        auto at = [&](double x) {
            Eigen::VectorXd th = theta;
            th(i) = x;
            return MultiParams::unpack(th);
        };
        const double fd = oracle::central_difference([&](double x) { return multi_log_likelihood(s, at(x)); },
                                                     theta(i), eps);
        CHECK(std::abs(fd - g(i)) <= 1e-5 * (1 + g.cwiseAbs().maxCoeff()));
        for (Eigen::Index j = 0; j < theta.size(); ++j) {
            const double hd = oracle::central_difference([&](double x) { return multi_score(s, at(x))(j); },
                                                         theta(i), eps);
            CHECK(std::abs(hd - h(i, j)) <= 1e-5 * (1 + h.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("marginalization identity on noise-free counts") {
    const auto s = three_variant_expected();
    FitOptions opt;
    opt.tolerance = 1e-4;
    const auto full = fit_multi(s, opt);
    CHECK(std::abs(full.params.betas[0] - std::log(1.4)) <= 1e-6);
    CHECK(std::abs(full.params.betas[1] - std::log(2.1)) <= 1e-6);
    const auto pair02 = fit(marginalize(s, 0, 2), opt);
    CHECK(std::abs(pair02.params.beta - full.params.betas[1]) <= 1e-6);
    const auto pair12 = fit(marginalize(s, 1, 2), opt);
    CHECK(std::abs(pair12.gamma().value() - 2.1 / 1.4) <= 1e-6);
    const auto renum = fit_multi(with_numeraire(s, 1), opt);
    CHECK(std::abs(renum.params.betas[1] - std::log(2.1 / 1.4)) <= 1e-6);
    CHECK(code_of([&] { marginalize(s, 0, 3); }) == ErrorCode::InvalidIndex);
    CHECK(code_of([&] { marginalize(s, 1, 1); }) == ErrorCode::InvalidIndex);
}

TEST_CASE("MultiSeries validation and CSV") {
    using Row = MultiSeries::Row;
    CHECK(code_of([] { MultiSeries({{1, "a", {1, 2}}}, {"x", "y"}); }) == ErrorCode::EmptySeries);
    CHECK(code_of([] { MultiSeries({{1, "a", {1, 2}}, {1, "b", {1, 2}}}, {"x", "y"}); }) ==
          ErrorCode::DuplicatePeriod);
    CHECK(code_of([] { MultiSeries({{1, "a", {1, -2}}, {2, "b", {1, 2}}}, {"x", "y"}); }) ==
          ErrorCode::CountViolation);
    CHECK(code_of([] { MultiSeries({{1, "a", {1, 2, 3}}, {2, "b", {1, 2}}}, {"x", "y"}); }) ==
          ErrorCode::InvalidArgument);
    const MultiSeries s({Row{2, "b", {5, 6, 7}}, Row{1, "a", {10, 1, 0}}}, {"old", "mid", "new"});
    CHECK(s[0].t_index == 1);
    CHECK(s.total(1) == 18);
    std::stringstream buf;
    write_multi_csv(buf, s);
    CHECK(buf.str().rfind("t,label,old,mid,new\n", 0) == 0);
    CHECK(read_multi_csv(buf) == s);
    std::istringstream bad("t,label,a,b\n1,x,3\n");
    CHECK(code_of([&] { read_multi_csv(bad); }) == ErrorCode::ParseError);
}

TEST_CASE("multi fit separation") {
    using Row = MultiSeries::Row;
    const MultiSeries s({Row{1, "a", {10, 0, 3}}, Row{2, "b", {10, 0, 5}}, Row{3, "c", {8, 0, 9}}}, {"x", "y", "z"});
    CHECK(code_of([&] { fit_multi(s); }) == ErrorCode::Separation);
}
