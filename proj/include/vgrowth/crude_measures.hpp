#pragma once

#include <vector>

#include "vgrowth/data_model.hpp"
#include "vgrowth/robust_inference.hpp"

namespace vgrowth {

// Model-free advantage for one adjacent pair of records: the ratio of the
// later to the earlier empirical odds, reduced to a single period.
struct CrudeMeasure {
    std::int64_t t_index;  // later record of the pair
    double value;
    double ci_low;
    double ci_high;
    bool corrected;  // +0.5 added to all four cells because one was zero
};

// One measure per adjacent record pair. A pair spanning dt > 1 periods is
// reduced with the dt-th root. Intervals are Wald intervals on the log ratio.
std::vector<CrudeMeasure> crude_gammas(const SurveillanceSeries& series, double level = kDefaultLevel);

double mean_crude_gamma(const std::vector<CrudeMeasure>& measures);

struct ProportionInterval {
    std::int64_t t_index;
    double estimate;
    double ci_low;
    double ci_high;
};

// Wilson score interval for X_t / N_t. Records with N_t = 0 are skipped.
ProportionInterval wilson_interval(std::int64_t successes, std::int64_t trials, double level);
std::vector<ProportionInterval> proportion_intervals(const SurveillanceSeries& series, double level = kDefaultLevel);

}  // namespace vgrowth
