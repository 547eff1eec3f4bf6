#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "vgrowth/data_model.hpp"
#include "vgrowth/error.hpp"

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

const ObservationRecord& at_label(const SurveillanceSeries& s, std::string_view label) {
    for (const auto& r : s) {
        if (r.label == label) return r;
    }
    FAIL("label not found: " << label);
    return s[0];
}

}  // namespace

TEST_CASE("validate_series accepts the bundled Alpha rows and sorts by t") {
    auto alpha = load_bundled("alpha");
    auto raw = alpha.records();
    std::reverse(raw.begin(), raw.end());
    const auto s = validate_series(raw, 7.0);
    CHECK(s.size() == 18);
    CHECK(s == alpha);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].t_index > s[i - 1].t_index);
}

TEST_CASE("validate_series errors") {
    CHECK(code_of([] { validate_series({{1, "a", 10, 2, {}, {}}}); }) == ErrorCode::EmptySeries);
    CHECK(code_of([] { validate_series({}); }) == ErrorCode::EmptySeries);
    CHECK(code_of([] { validate_series({{1, "a", 3, 5, {}, {}}, {2, "b", 10, 1, {}, {}}}); }) ==
          ErrorCode::CountViolation);
    CHECK(code_of([] { validate_series({{1, "a", 30, 5, 20, {}}, {2, "b", 10, 1, {}, {}}}); }) ==
          ErrorCode::CountViolation);
    CHECK(code_of([] { validate_series({{1, "a", 3, 1, {}, {}}, {1, "b", 10, 1, {}, {}}}); }) ==
          ErrorCode::DuplicatePeriod);
    CHECK(code_of([] { validate_series({{1, "a", 3, 1, {}, {}}, {2, "b", 10, 1, {}, {}}}, 0.0); }) ==
          ErrorCode::NonPositivePeriod);
}

TEST_CASE("gaps in t_index are kept") {
    const auto s = validate_series({{1, "a", 10, 1, {}, {}}, {4, "b", 10, 5, {}, {}}, {5, "c", 10, 6, {}, {}}});
    CHECK(s[1].t_index == 4);
}

TEST_CASE("bundled datasets match the published tables") {
    const auto alpha = load_bundled("alpha");
    const auto delta = load_bundled("delta");
    const auto omicron = load_bundled("omicron");
    CHECK(alpha.size() == 18);
    CHECK(delta.size() == 10);
    CHECK(omicron.size() == 31);
    CHECK(alpha.period_days() == 7.0);
    CHECK(omicron.period_days() == 1.0);

    const auto& w46 = at_label(alpha, "2020-W46");
    CHECK(w46.sequenced == 1486);
    CHECK(w46.variant_count == 4);
    CHECK(w46.t_index == 1);
    const auto& d8 = at_label(omicron, "2021-12-08");
    CHECK(d8.sequenced == 6232);
    CHECK(d8.variant_count == 649);
    const auto& w25 = at_label(delta, "2021-W25");
    CHECK(w25.sequenced == 1165);
    CHECK(w25.variant_count == 345);
    CHECK(*w25.total_cases == 1315);

    CHECK_THROWS_AS(load_bundled("beta"), Error);
    CHECK(code_of([] { load_bundled("beta"); }) == ErrorCode::UnknownDataset);
}

TEST_CASE("bundled proportions reproduce the printed percentages") {
    // Percentages as printed, two decimals for weekly tables, one for daily.
    const std::vector<double> alpha_pct{0.27, 0.15, 0.33, 0.38, 0.38, 0.75, 1.76, 2.04, 3.77,
                                        7.04, 12.83, 19.51, 29.66, 47.06, 65.81, 76.11, 85.18, 92.45};
    const std::vector<double> delta_pct{0.24, 0.29, 0.79, 2.68, 6.67, 29.61, 64.31, 81.34, 92.45, 95.65};
    const std::vector<double> omicron_pct{1.8,  1.4,  1.5,  2.2,  3.3,  5.0,  7.4,  10.4, 11.4, 13.1, 16.8,
                                          22.4, 28.9, 38.7, 46.4, 46.8, 52.9, 55.9, 61.9, 62.8, 76.2, 78.2,
                                          78.5, 82.7, 77.0, 86.5, 88.8, 90.0, 92.8, 91.1, 91.6};
    auto check = [](const SurveillanceSeries& s, const std::vector<double>& pct, double unit) {
        REQUIRE(s.size() == pct.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double p = 100.0 * static_cast<double>(s[i].variant_count) / static_cast<double>(s[i].sequenced);
            INFO(s[i].label);
            CHECK(std::abs(p - pct[i]) <= 0.5 * unit + 1e-9);
        }
    };
    check(load_bundled("alpha"), alpha_pct, 0.01);
    check(load_bundled("delta"), delta_pct, 0.01);
    check(load_bundled("omicron"), omicron_pct, 0.1);
    const auto& w3 = load_bundled("alpha")[10];
    CHECK(w3.label == "2021-W03");
    CHECK(100.0 * 473 / 3688 == doctest::Approx(12.83).epsilon(0.0005));
}

TEST_CASE("read_csv") {
    SUBCASE("well-formed") {
        std::istringstream in(
            "t,label,sequenced,variant_count,total_cases,tested\n"
            "1,w1,100,3,,\n2,w2,120,9,200,5000\n3,w3,90,12,,\n");
        const auto s = read_csv(in);
        CHECK(s.size() == 3);
        CHECK(!s[0].total_cases);
        CHECK(*s[1].tested == 5000);
    }
    SUBCASE("header only") {
        std::istringstream in("t,label,sequenced,variant_count,total_cases,tested\n");
        CHECK(code_of([&] { read_csv(in); }) == ErrorCode::EmptySeries);
    }
    SUBCASE("negative count reports its row") {
        std::istringstream in("t,label,sequenced,variant_count,total_cases,tested\n1,a,10,1,,\n2,b,-5,1,,\n");
        try {
            read_csv(in);
            FAIL("expected ParseError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            CHECK(std::string(e.what()).find("row 3") != std::string::npos);
        }
    }
    SUBCASE("malformed fields") {
        std::istringstream bad_header("t,label,n,x\n1,a,1,1\n");
        CHECK(code_of([&] { read_csv(bad_header); }) == ErrorCode::ParseError);
        std::istringstream short_row("t,label,sequenced,variant_count,total_cases,tested\n1,a,10\n");
        CHECK(code_of([&] { read_csv(short_row); }) == ErrorCode::ParseError);
        std::istringstream text("t,label,sequenced,variant_count,total_cases,tested\n1,a,ten,1,,\n2,b,1,1,,\n");
        CHECK(code_of([&] { read_csv(text); }) == ErrorCode::ParseError);
    }
    SUBCASE("count violation") {
        std::istringstream in("t,label,sequenced,variant_count,total_cases,tested\n1,a,10,11,,\n2,b,10,1,,\n");
        CHECK(code_of([&] { read_csv(in); }) == ErrorCode::CountViolation);
    }
    CHECK(code_of([] { load_csv("/nonexistent/file.csv"); }) == ErrorCode::IoError);
}

TEST_CASE("CSV round trip preserves random series") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> n(0, 10000);
    std::bernoulli_distribution has(0.5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<ObservationRecord> rs;
        std::int64_t t = -3;
        for (int i = 0; i < 2 + rep % 7; ++i) {
            t += 1 + static_cast<std::int64_t>(rng() % 3);
            const auto seq = n(rng);
            const auto x = seq == 0 ? 0 : static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(seq + 1));
            ObservationRecord r{t, "p" + std::to_string(i), seq, x, std::nullopt, std::nullopt};
            if (has(rng)) r.total_cases = seq + n(rng);
            if (has(rng)) r.tested = n(rng);
            rs.push_back(r);
        }
        const SurveillanceSeries s(rs, 1.0 + rep);
        std::stringstream buf;
        write_csv(buf, s);
        CHECK(read_csv(buf, s.period_days()) == s);
    }
    const auto path = std::filesystem::temp_directory_path() / "vgrowth_roundtrip.csv";
    save_csv(path, load_bundled("omicron"));
    CHECK(load_csv(path, 1.0) == load_bundled("omicron"));
    std::filesystem::remove(path);
}

TEST_CASE("slice and shift") {
    const auto alpha = load_bundled("alpha");
    const auto w = alpha.slice(5, 8);
    CHECK(w.size() == 4);
    CHECK(w[0].label == "2020-W50");
    CHECK(code_of([&] { alpha.slice(40, 50); }) == ErrorCode::WindowOutOfRange);
    const auto moved = alpha.shifted(10);
    CHECK(moved[0].t_index == 11);
}
