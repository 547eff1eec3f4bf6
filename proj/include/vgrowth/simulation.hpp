#pragma once

#include <cstdint>
#include <vector>

#include "vgrowth/data_model.hpp"
#include "vgrowth/multivariant.hpp"
#include "vgrowth/robust_inference.hpp"

namespace vgrowth {

// Data-generating process for synthetic surveillance series.
//
// Proportions start at `initial` (time 0) and follow the m-variant recursion;
// period t = 1..T draws a multinomial sample of size sequenced[t-1]. With a
// growth schedule, numeraire cases grow by growth[t-1] per period and variant
// j by gammas[j-1] * growth[t-1], which fixes total_cases.
struct SimConfig {
    std::vector<double> gammas;          // m - 1 per-period advantages
    std::vector<double> initial;         // m proportions at t = 0
    std::vector<std::int64_t> sequenced; // N_t for t = 1..T
    std::uint64_t seed = 0;
    std::vector<double> growth;          // optional a_t, length T
    double initial_cases = 1000.0;       // total cases at t = 0 when growth is given
    double period_days = kDefaultPeriodDays;

    std::size_t variants() const noexcept { return initial.size(); }
};

// Throws InvalidConfig.
void validate_config(const SimConfig& config);

// Deterministic proportion path lambda_{j,t} for t = 1..T.
std::vector<std::vector<double>> expected_proportions(const SimConfig& config);

// One replication. The RNG stream is a pure function of (seed, replication).
MultiSeries simulate_multi(const SimConfig& config, std::uint64_t replication = 0);

// Two-variant convenience: requires m = 2; variant_count is variant 2.
SurveillanceSeries simulate(const SimConfig& config, std::uint64_t replication = 0);

// Noise-free counts: N_t * lambda_{j,t} rounded to integers.
MultiSeries expected_counts(const SimConfig& config);

struct RecoveryReport {
    std::size_t replications = 0;
    std::size_t failures = 0;       // fits that threw
    double true_gamma = 0.0;
    double mean_gamma = 0.0;
    double relative_bias = 0.0;     // (mean_gamma - true_gamma) / true_gamma
    double coverage = 0.0;          // share of successful fits whose interval holds true_gamma
    double mean_ci_width = 0.0;
    std::vector<double> estimates;  // gamma-hat per successful replication
};

// Refits replications 0..n-1 of a two-variant config and summarizes how well
// the per-period gamma is recovered.
RecoveryReport recovery_report(const SimConfig& config, std::size_t n_replications,
                               VarianceKind kind = VarianceKind::fisher(), double level = kDefaultLevel);

}  // namespace vgrowth
