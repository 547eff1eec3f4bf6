#include "vgrowth/crude_measures.hpp"

#include <cmath>
#include <numeric>

#include "vgrowth/error.hpp"

namespace vgrowth {

std::vector<CrudeMeasure> crude_gammas(const SurveillanceSeries& series, double level) {
    const double z = z_for_level(level);
    std::vector<CrudeMeasure> out;
    out.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        const auto& prev = series[i - 1];
        const auto& cur = series[i];
        double x0 = static_cast<double>(prev.variant_count);
        double y0 = static_cast<double>(prev.sequenced - prev.variant_count);
        double x1 = static_cast<double>(cur.variant_count);
        double y1 = static_cast<double>(cur.sequenced - cur.variant_count);
        const bool corrected = x0 == 0 || y0 == 0 || x1 == 0 || y1 == 0;
        if (corrected) {
            x0 += 0.5;
            y0 += 0.5;
            x1 += 0.5;
            y1 += 0.5;
        }
        const double log_ratio = std::log(x1 / y1) - std::log(x0 / y0);
        const double se = std::sqrt(1.0 / x0 + 1.0 / y0 + 1.0 / x1 + 1.0 / y1);
        const auto dt = static_cast<double>(cur.t_index - prev.t_index);
        out.push_back({cur.t_index, std::exp(log_ratio / dt), std::exp((log_ratio - z * se) / dt),
                       std::exp((log_ratio + z * se) / dt), corrected});
    }
    return out;
}

double mean_crude_gamma(const std::vector<CrudeMeasure>& measures) {
    if (measures.empty()) throw Error(ErrorCode::InvalidArgument, "no crude measures");
    const double sum = std::accumulate(measures.begin(), measures.end(), 0.0,
                                       [](double acc, const CrudeMeasure& m) { return acc + m.value; });
    return sum / static_cast<double>(measures.size());
}

ProportionInterval wilson_interval(std::int64_t successes, std::int64_t trials, double level) {
    if (trials <= 0) throw Error(ErrorCode::NonPositiveCount, "Wilson interval needs trials > 0");
    const double z = z_for_level(level);
    const auto n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    double lo = successes == 0 ? 0.0 : std::fmax(0.0, center - half);
    double hi = successes == trials ? 1.0 : std::fmin(1.0, center + half);
    return {0, p, std::fmin(lo, p), std::fmax(hi, p)};
}

std::vector<ProportionInterval> proportion_intervals(const SurveillanceSeries& series, double level) {
    std::vector<ProportionInterval> out;
    out.reserve(series.size());
    for (const auto& r : series) {
        if (r.sequenced == 0) continue;
        auto iv = wilson_interval(r.variant_count, r.sequenced, level);
        iv.t_index = r.t_index;
        out.push_back(iv);
    }
    return out;
}

}  // namespace vgrowth
