#include <array>
#include <cstdio>
#include <string>

#include "vgrowth/data_model.hpp"
#include "vgrowth/error.hpp"

namespace vgrowth {

namespace {

struct Row {
    const char* label;
    std::int64_t tested;
    std::int64_t cases;
    std::int64_t sequenced;
    std::int64_t variant;
};

// Weekly PCR tests, positive cases, sequenced cases and Alpha cases in Denmark,
// weeks 46/2020 to 10/2021.
constexpr std::array<Row, 18> kAlpha{{
    {"2020-W46", 490543, 7533, 1486, 4},
    {"2020-W47", 502852, 8456, 1941, 3},
    {"2020-W48", 502851, 8774, 2127, 7},
    {"2020-W49", 544578, 12816, 2868, 11},
    {"2020-W50", 694989, 21925, 4226, 16},
    {"2020-W51", 883253, 24579, 4943, 37},
    {"2020-W52", 650374, 17043, 3633, 64},
    {"2020-W53", 536958, 14560, 3916, 80},
    {"2021-W01", 563348, 11311, 4161, 157},
    {"2021-W02", 596048, 7008, 4230, 298},
    {"2021-W03", 739922, 5321, 3688, 473},
    {"2021-W04", 768925, 3616, 2660, 519},
    {"2021-W05", 794917, 3096, 2235, 663},
    {"2021-W06", 809028, 2716, 1974, 929},
    {"2021-W07", 833795, 3335, 2416, 1590},
    {"2021-W08", 956070, 3688, 2683, 2042},
    {"2021-W09", 1033111, 3616, 2699, 2299},
    {"2021-W10", 1056404, 3809, 2874, 2657},
}};

// Weekly counts for the Delta period, weeks 20 to 29 of 2021.
constexpr std::array<Row, 10> kDelta{{
    {"2021-W20", 1167981, 6867, 5366, 13},
    {"2021-W21", 1013403, 6698, 5213, 15},
    {"2021-W22", 911764, 5662, 4565, 36},
    {"2021-W23", 720274, 2811, 2467, 66},
    {"2021-W24", 575207, 1649, 1364, 91},
    {"2021-W25", 524837, 1315, 1165, 345},
    {"2021-W26", 608540, 2674, 2418, 1555},
    {"2021-W27", 624414, 4614, 3322, 2702},
    {"2021-W28", 583932, 6818, 6253, 5781},
    {"2021-W29", 473843, 5289, 4800, 4591},
}};

// Daily variant-PCR results, December 2021. From 2021-12-20 on only a
// subsample of positives was sequenced; counts are stored as published.
constexpr std::array<Row, 31> kOmicron{{
    {"2021-12-01", 185372, 4910, 4267, 77},     {"2021-12-02", 213494, 5040, 4294, 62},
    {"2021-12-03", 188041, 5651, 4946, 75},     {"2021-12-04", 140790, 5577, 5089, 111},
    {"2021-12-05", 147722, 5450, 4995, 167},    {"2021-12-06", 209434, 7645, 6762, 337},
    {"2021-12-07", 207987, 7902, 6928, 515},    {"2021-12-08", 205263, 7136, 6232, 649},
    {"2021-12-09", 243089, 7157, 6228, 707},    {"2021-12-10", 210756, 7520, 6444, 843},
    {"2021-12-11", 153995, 7210, 6443, 1080},   {"2021-12-12", 165474, 7723, 6794, 1521},
    {"2021-12-13", 229948, 11350, 9316, 2691},  {"2021-12-14", 221944, 12252, 10456, 4044},
    {"2021-12-15", 217007, 12041, 10409, 4827}, {"2021-12-16", 254680, 11388, 9475, 4438},
    {"2021-12-17", 233617, 11950, 9860, 5213},  {"2021-12-18", 174168, 11420, 9233, 5163},
    {"2021-12-19", 180302, 11717, 7927, 4908},  {"2021-12-20", 267264, 15228, 2565, 1611},
    {"2021-12-21", 254893, 14875, 3199, 2437},  {"2021-12-22", 269139, 13684, 1323, 1035},
    {"2021-12-23", 243139, 14729, 3450, 2708},  {"2021-12-24", 71463, 8322, 597, 494},
    {"2021-12-25", 71502, 9233, 915, 705},      {"2021-12-26", 79592, 12300, 2297, 1986},
    {"2021-12-27", 182893, 25168, 4657, 4134},  {"2021-12-28", 191226, 24273, 1471, 1324},
    {"2021-12-29", 213584, 19292, 359, 333},    {"2021-12-30", 225529, 21727, 910, 829},
    {"2021-12-31", 71125, 11027, 429, 393},
}};

template <std::size_t N>
SurveillanceSeries to_series(const std::array<Row, N>& rows, double period_days) {
    std::vector<ObservationRecord> records;
    records.reserve(N);
    std::int64_t t = 1;
    for (const auto& row : rows) {
        records.push_back({t++, row.label, row.sequenced, row.variant, row.cases, row.tested});
    }
    return SurveillanceSeries(std::move(records), period_days);
}

constexpr std::array<std::string_view, 3> kNames{"alpha", "delta", "omicron"};

}  // namespace

std::span<const std::string_view> bundled_dataset_names() noexcept { return kNames; }

SurveillanceSeries load_bundled(std::string_view name) {
    if (name == "alpha") return to_series(kAlpha, 7.0);
    if (name == "delta") return to_series(kDelta, 7.0);
    if (name == "omicron") return to_series(kOmicron, 1.0);
    throw Error(ErrorCode::UnknownDataset, "unknown dataset '" + std::string(name) + "' (expected alpha, delta or omicron)");
}

}  // namespace vgrowth
