#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "vgrowth/data_model.hpp"
#include "vgrowth/dynamics.hpp"
#include "vgrowth/robust_inference.hpp"

namespace vgrowth {

inline constexpr double kDefaultTestingExponent = 0.7;

struct ReproInference {
    double R_all;
    double lambda;
    double gamma_gen;
    double R_variant;    // R_all * (lambda + gamma (1 - lambda))
    double R_incumbent;  // R_variant / gamma
};

// Reproduction numbers of both variants from the aggregate R over one
// generation. Throws NonPositiveR.
ReproInference infer_variant_R(double R_all, Proportion lambda, const Advantage& gamma_gen);

// [(cases_t / cases_prev) (tested_t / tested_prev)^(-exponent)]^(gen_days / period_days).
// Throws NonPositiveCount.
double adjusted_R(double cases_t, double cases_prev, double tested_t, double tested_prev,
                  double gen_days = kDefaultGenerationDays, double period_days = kDefaultPeriodDays,
                  double exponent = kDefaultTestingExponent);

struct AdjustedRPoint {
    std::int64_t t_index;
    std::string label;
    double R;
    double proportion;  // X_t / N_t
};

// adjusted_R for each adjacent pair of records that carries total_cases and
// tested, paired with the empirical proportion of the later record.
std::vector<AdjustedRPoint> adjusted_R_series(const SurveillanceSeries& series,
                                              double gen_days = kDefaultGenerationDays,
                                              double exponent = kDefaultTestingExponent);

struct StabilityPoint {
    double lambda;
    double threshold;  // aggregate R at which R_variant = 1 for the point gamma
    double lo;         // same with the upper gamma endpoint
    double hi;         // same with the lower gamma endpoint
};

// R threshold 1 / (lambda + gamma (1 - lambda)) over a grid of proportions.
std::vector<StabilityPoint> stability_region(const AdvantageEstimate& gamma_gen, std::span<const double> lambda_grid);

// start, start + step, ..., stop (inclusive, snapped to the grid).
std::vector<double> lambda_grid(double start, double stop, double step);

void write_contour_csv(std::ostream& out, std::span<const StabilityPoint> rows);

}  // namespace vgrowth
