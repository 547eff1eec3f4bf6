#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vgrowth {

inline constexpr double kDefaultPeriodDays = 7.0;

// One surveillance period: N sequenced cases of which X carry the new variant.
struct ObservationRecord {
    std::int64_t t_index = 0;
    std::string label;
    std::int64_t sequenced = 0;
    std::int64_t variant_count = 0;
    std::optional<std::int64_t> total_cases;
    std::optional<std::int64_t> tested;

    bool operator==(const ObservationRecord&) const = default;
};

// Validated, t-ordered surveillance series. Immutable once constructed.
//
// t_index values are data-driven: gaps are allowed and every model quantity is
// evaluated at the stored t_index, never at the row position.
class SurveillanceSeries {
public:
    // Sorts by t_index and validates. Throws Error with EmptySeries,
    // CountViolation, DuplicatePeriod or NonPositivePeriod.
    SurveillanceSeries(std::vector<ObservationRecord> records, double period_days = kDefaultPeriodDays);

    const std::vector<ObservationRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    const ObservationRecord& operator[](std::size_t i) const { return records_[i]; }
    double period_days() const noexcept { return period_days_; }

    auto begin() const noexcept { return records_.begin(); }
    auto end() const noexcept { return records_.end(); }

    // Records with t_from <= t_index <= t_through. Throws WindowOutOfRange if
    // the window holds fewer than two records.
    SurveillanceSeries slice(std::int64_t t_from, std::int64_t t_through) const;

    // Same counts with every t_index moved by `shift`.
    SurveillanceSeries shifted(std::int64_t shift) const;

    bool operator==(const SurveillanceSeries&) const = default;

private:
    std::vector<ObservationRecord> records_;
    double period_days_;
};

// Logistic parameters: alpha is the log-odds at t = 0, beta the per-period log
// advantage.
struct ModelParams {
    double alpha = 0.0;
    double beta = 0.0;

    bool operator==(const ModelParams&) const = default;
};

SurveillanceSeries validate_series(std::vector<ObservationRecord> raw, double period_days = kDefaultPeriodDays);

// Names accepted by load_bundled.
std::span<const std::string_view> bundled_dataset_names() noexcept;

// Danish surveillance tables: "alpha" (weekly, 18 rows), "delta" (weekly, 10
// rows) and "omicron" (daily, 31 rows). t_index runs 1..T in row order.
SurveillanceSeries load_bundled(std::string_view name);

// CSV with header `t,label,sequenced,variant_count,total_cases,tested`.
SurveillanceSeries read_csv(std::istream& in, double period_days = kDefaultPeriodDays);
SurveillanceSeries load_csv(const std::filesystem::path& path, double period_days = kDefaultPeriodDays);

void write_csv(std::ostream& out, const SurveillanceSeries& series);
void save_csv(const std::filesystem::path& path, const SurveillanceSeries& series);

namespace detail {
// Splits one CSV line on commas; no quoting support.
std::vector<std::string> split_csv_line(std::string_view line);
std::optional<std::int64_t> parse_count(std::string_view field, std::size_t row, std::string_view column,
                                        bool allow_empty);
}  // namespace detail

}  // namespace vgrowth
