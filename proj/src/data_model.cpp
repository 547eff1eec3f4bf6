#include "vgrowth/data_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vgrowth/error.hpp"

namespace vgrowth {

namespace {

constexpr std::string_view kCsvHeader = "t,label,sequenced,variant_count,total_cases,tested";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

void check_record(const ObservationRecord& r) {
    if (r.sequenced < 0 || r.variant_count < 0 || r.total_cases.value_or(0) < 0 || r.tested.value_or(0) < 0) {
        throw Error(ErrorCode::CountViolation, "negative count at t=" + std::to_string(r.t_index));
    }
    if (r.variant_count > r.sequenced) {
        throw Error(ErrorCode::CountViolation, "variant_count " + std::to_string(r.variant_count) +
                                                   " exceeds sequenced " + std::to_string(r.sequenced) +
                                                   " at t=" + std::to_string(r.t_index));
    }
    if (r.total_cases && r.sequenced > *r.total_cases) {
        throw Error(ErrorCode::CountViolation, "sequenced " + std::to_string(r.sequenced) + " exceeds total_cases " +
                                                   std::to_string(*r.total_cases) +
                                                   " at t=" + std::to_string(r.t_index));
    }
}

}  // namespace

SurveillanceSeries::SurveillanceSeries(std::vector<ObservationRecord> records, double period_days)
    : records_(std::move(records)), period_days_(period_days) {
    if (!(period_days_ > 0.0) || !std::isfinite(period_days_)) {
        throw Error(ErrorCode::NonPositivePeriod, "period_days must be positive");
    }
    if (records_.size() < 2) {
        throw Error(ErrorCode::EmptySeries,
                    "series needs at least 2 records, got " + std::to_string(records_.size()));
    }
    std::stable_sort(records_.begin(), records_.end(),
                     [](const ObservationRecord& a, const ObservationRecord& b) { return a.t_index < b.t_index; });
    for (std::size_t i = 0; i < records_.size(); ++i) {
        check_record(records_[i]);
        if (i > 0 && records_[i].t_index == records_[i - 1].t_index) {
            throw Error(ErrorCode::DuplicatePeriod, "duplicate t_index " + std::to_string(records_[i].t_index));
        }
    }
}

SurveillanceSeries SurveillanceSeries::slice(std::int64_t t_from, std::int64_t t_through) const {
    std::vector<ObservationRecord> kept;
    for (const auto& r : records_) {
        if (r.t_index >= t_from && r.t_index <= t_through) kept.push_back(r);
    }
    if (kept.size() < 2) {
        throw Error(ErrorCode::WindowOutOfRange, "window [" + std::to_string(t_from) + ", " +
                                                     std::to_string(t_through) + "] holds fewer than 2 records");
    }
    return SurveillanceSeries(std::move(kept), period_days_);
}

SurveillanceSeries SurveillanceSeries::shifted(std::int64_t shift) const {
    auto moved = records_;
    for (auto& r : moved) r.t_index += shift;
    return SurveillanceSeries(std::move(moved), period_days_);
}

SurveillanceSeries validate_series(std::vector<ObservationRecord> raw, double period_days) {
    return SurveillanceSeries(std::move(raw), period_days);
}

namespace detail {

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(start)));
            break;
        }
        fields.emplace_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

std::optional<std::int64_t> parse_count(std::string_view field, std::size_t row, std::string_view column,
                                        bool allow_empty) {
    field = trim(field);
    if (field.empty()) {
        if (allow_empty) return std::nullopt;
        throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": empty " + std::string(column));
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": malformed " + std::string(column) +
                                               " '" + std::string(field) + "'");
    }
    if (value < 0 && column != "t") {
        throw Error(ErrorCode::ParseError,
                    "row " + std::to_string(row) + ": negative " + std::string(column) + " " + std::to_string(value));
    }
    return value;
}

}  // namespace detail

SurveillanceSeries read_csv(std::istream& in, double period_days) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "missing header");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line) != kCsvHeader) {
        throw Error(ErrorCode::ParseError, "unexpected header '" + std::string(trim(line)) + "', expected '" +
                                               std::string(kCsvHeader) + "'");
    }
    std::vector<ObservationRecord> records;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 6) {
            throw Error(ErrorCode::ParseError,
                        "row " + std::to_string(row) + ": expected 6 fields, got " + std::to_string(f.size()));
        }
        ObservationRecord r;
        r.t_index = *detail::parse_count(f[0], row, "t", false);
        r.label = f[1];
        r.sequenced = *detail::parse_count(f[2], row, "sequenced", false);
        r.variant_count = *detail::parse_count(f[3], row, "variant_count", false);
        r.total_cases = detail::parse_count(f[4], row, "total_cases", true);
        r.tested = detail::parse_count(f[5], row, "tested", true);
        records.push_back(std::move(r));
    }
    return SurveillanceSeries(std::move(records), period_days);
}

SurveillanceSeries load_csv(const std::filesystem::path& path, double period_days) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_csv(in, period_days);
}

void write_csv(std::ostream& out, const SurveillanceSeries& series) {
    out << kCsvHeader << '\n';
    for (const auto& r : series) {
        out << r.t_index << ',' << r.label << ',' << r.sequenced << ',' << r.variant_count << ',';
        if (r.total_cases) out << *r.total_cases;
        out << ',';
        if (r.tested) out << *r.tested;
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const SurveillanceSeries& series) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    write_csv(out, series);
}

}  // namespace vgrowth
