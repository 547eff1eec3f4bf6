#include "vgrowth/repro.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "vgrowth/error.hpp"

namespace vgrowth {

ReproInference infer_variant_R(double R_all, Proportion lambda, const Advantage& gamma_gen) {
    if (!(R_all > 0.0) || !std::isfinite(R_all)) {
        throw Error(ErrorCode::NonPositiveR, "aggregate R must be positive");
    }
    const double l = lambda.value();
    const double g = gamma_gen.value();
    const double rb = R_all * (l + g * (1.0 - l));
    return {R_all, l, g, rb, rb / g};
}

double adjusted_R(double cases_t, double cases_prev, double tested_t, double tested_prev, double gen_days,
                  double period_days, double exponent) {
    if (!(cases_t > 0) || !(cases_prev > 0) || !(tested_t > 0) || !(tested_prev > 0)) {
        throw Error(ErrorCode::NonPositiveCount, "cases and tests must be positive");
    }
    if (!(gen_days > 0) || !(period_days > 0)) {
        throw Error(ErrorCode::NonPositivePeriod, "periods must be positive");
    }
    const double log_ratio = std::log(cases_t / cases_prev) - exponent * std::log(tested_t / tested_prev);
    return std::exp(gen_days / period_days * log_ratio);
}

std::vector<AdjustedRPoint> adjusted_R_series(const SurveillanceSeries& series, double gen_days, double exponent) {
    std::vector<AdjustedRPoint> out;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const auto& prev = series[i - 1];
        const auto& cur = series[i];
        if (!cur.total_cases || !prev.total_cases || !cur.tested || !prev.tested || cur.sequenced == 0) continue;
        const double span = series.period_days() * static_cast<double>(cur.t_index - prev.t_index);
        const double r = adjusted_R(static_cast<double>(*cur.total_cases), static_cast<double>(*prev.total_cases),
                                    static_cast<double>(*cur.tested), static_cast<double>(*prev.tested), gen_days,
                                    span, exponent);
        out.push_back({cur.t_index, cur.label, r,
                       static_cast<double>(cur.variant_count) / static_cast<double>(cur.sequenced)});
    }
    return out;
}

std::vector<StabilityPoint> stability_region(const AdvantageEstimate& gamma_gen, std::span<const double> lambda_grid) {
    std::vector<StabilityPoint> out;
    out.reserve(lambda_grid.size());
    auto threshold = [](double l, double g) { return 1.0 / (l + g * (1.0 - l)); };
    for (double l : lambda_grid) {
        Proportion checked(l);
        const double v = checked.value();
        const double a = threshold(v, gamma_gen.ci_high);
        const double b = threshold(v, gamma_gen.ci_low);
        out.push_back({v, threshold(v, gamma_gen.gamma.value()), std::fmin(a, b), std::fmax(a, b)});
    }
    return out;
}

std::vector<double> lambda_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start)) {
        throw Error(ErrorCode::InvalidArgument, "grid needs step > 0 and stop >= start");
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(std::fmin(stop, start + static_cast<double>(i) * step));
    return grid;
}

void write_contour_csv(std::ostream& out, std::span<const StabilityPoint> rows) {
    out << "lambda,threshold,lo,hi\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", r.lambda, r.threshold, r.lo, r.hi);
        out << buf;
    }
}

}  // namespace vgrowth
