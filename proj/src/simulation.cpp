#include "vgrowth/simulation.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>

#include "vgrowth/error.hpp"
#include "vgrowth/estimation.hpp"

namespace vgrowth {

namespace {

// mt19937_64 seeded through std::seed_seq, whose mixing is fixed by the
// standard, from the 64-bit seed split into halves and the replication index.
boost::random::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t replication) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(replication >> 32)};
    return boost::random::mt19937_64(seq);
}

std::string period_label(std::size_t t) { return "t" + std::to_string(t); }

std::vector<std::string> variant_names(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t j = 1; j <= m; ++j) names.push_back("variant_" + std::to_string(j));
    return names;
}

}  // namespace

void validate_config(const SimConfig& config) {
    const std::size_t m = config.variants();
    if (m < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 variants");
    if (config.gammas.size() != m - 1) {
        throw Error(ErrorCode::InvalidConfig, "need " + std::to_string(m - 1) + " advantages for " +
                                                  std::to_string(m) + " variants");
    }
    for (double g : config.gammas) {
        if (!(g > 0.0) || !std::isfinite(g)) throw Error(ErrorCode::InvalidConfig, "advantages must be positive");
    }
    double total = 0.0;
    for (double l : config.initial) {
        if (!(l >= 0.0)) throw Error(ErrorCode::InvalidConfig, "initial proportions must be non-negative");
        total += l;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidConfig, "initial proportions must sum to 1");
    if (config.sequenced.size() < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 periods");
    for (auto n : config.sequenced) {
        if (n < 0) throw Error(ErrorCode::InvalidConfig, "sequenced counts must be non-negative");
    }
    if (!config.growth.empty()) {
        if (config.growth.size() != config.sequenced.size()) {
            throw Error(ErrorCode::InvalidConfig, "growth schedule must have one entry per period");
        }
        for (double a : config.growth) {
            if (!(a > 0.0)) throw Error(ErrorCode::InvalidConfig, "growth factors must be positive");
        }
        if (!(config.initial_cases > 0.0)) throw Error(ErrorCode::InvalidConfig, "initial_cases must be positive");
    }
    if (!(config.period_days > 0.0)) throw Error(ErrorCode::InvalidConfig, "period_days must be positive");
}

std::vector<std::vector<double>> expected_proportions(const SimConfig& config) {
    validate_config(config);
    std::vector<std::vector<double>> path;
    std::vector<double> lam = config.initial;
    for (std::size_t t = 0; t < config.sequenced.size(); ++t) {
        lam = step_lambda_multi(lam, config.gammas);
        path.push_back(lam);
    }
    return path;
}

MultiSeries simulate_multi(const SimConfig& config, std::uint64_t replication) {
    const auto path = expected_proportions(config);
    const std::size_t m = config.variants();
    auto engine = make_engine(config.seed, replication);
    std::vector<MultiSeries::Row> rows;
    rows.reserve(path.size());
    for (std::size_t t = 0; t < path.size(); ++t) {
        // Multinomial draw as a chain of conditional binomials.
        std::vector<std::int64_t> counts(m, 0);
        std::int64_t remaining = config.sequenced[t];
        double mass = 1.0;
        for (std::size_t j = 0; j + 1 < m && remaining > 0; ++j) {
            const double p = mass > 0.0 ? std::fmin(1.0, std::fmax(0.0, path[t][j] / mass)) : 0.0;
            if (p >= 1.0) {
                counts[j] = remaining;
            } else if (p > 0.0) {
                boost::random::binomial_distribution<std::int64_t, double> draw(remaining, p);
                counts[j] = draw(engine);
            }
            remaining -= counts[j];
            mass -= path[t][j];
        }
        counts[m - 1] += remaining;
        rows.push_back({static_cast<std::int64_t>(t + 1), period_label(t + 1), std::move(counts)});
    }
    return MultiSeries(std::move(rows), variant_names(m), config.period_days);
}

SurveillanceSeries simulate(const SimConfig& config, std::uint64_t replication) {
    if (config.variants() != 2) throw Error(ErrorCode::InvalidConfig, "two-variant simulation needs m = 2");
    const MultiSeries multi = simulate_multi(config, replication);
    std::vector<ObservationRecord> records;
    records.reserve(multi.size());
    std::vector<double> cases(config.initial.begin(), config.initial.end());
    for (double& c : cases) c *= config.initial_cases;
    for (std::size_t i = 0; i < multi.size(); ++i) {
        const auto& r = multi[i];
        ObservationRecord rec{r.t_index, r.label, r.counts[0] + r.counts[1], r.counts[1], std::nullopt, std::nullopt};
        if (!config.growth.empty()) {
            cases[0] *= config.growth[i];
            cases[1] *= config.gammas[0] * config.growth[i];
            rec.total_cases = std::max(rec.sequenced, static_cast<std::int64_t>(std::llround(cases[0] + cases[1])));
        }
        records.push_back(std::move(rec));
    }
    return SurveillanceSeries(std::move(records), config.period_days);
}

MultiSeries expected_counts(const SimConfig& config) {
    const auto path = expected_proportions(config);
    std::vector<MultiSeries::Row> rows;
    for (std::size_t t = 0; t < path.size(); ++t) {
        std::vector<std::int64_t> counts;
        for (double l : path[t]) {
            counts.push_back(static_cast<std::int64_t>(std::llround(l * static_cast<double>(config.sequenced[t]))));
        }
        rows.push_back({static_cast<std::int64_t>(t + 1), period_label(t + 1), std::move(counts)});
    }
    return MultiSeries(std::move(rows), variant_names(config.variants()), config.period_days);
}

RecoveryReport recovery_report(const SimConfig& config, std::size_t n_replications, VarianceKind kind, double level) {
    if (n_replications < 1) throw Error(ErrorCode::InvalidConfig, "need at least one replication");
    if (config.variants() != 2) throw Error(ErrorCode::InvalidConfig, "recovery report needs m = 2");
    RecoveryReport report;
    report.replications = n_replications;
    report.true_gamma = config.gammas[0];
    std::size_t covered = 0;
    double width_sum = 0.0;
    for (std::size_t rep = 0; rep < n_replications; ++rep) {
        try {
            const auto series = simulate(config, rep);
            const auto result = fit(series);
            const auto var = variance(series, result, kind);
            const auto ci = interval_for_gamma(var, result, series.period_days(), level);
            report.estimates.push_back(ci.gamma.value());
            width_sum += ci.ci_high - ci.ci_low;
            if (ci.ci_low <= report.true_gamma && report.true_gamma <= ci.ci_high) ++covered;
        } catch (const Error&) {
            ++report.failures;
        }
    }
    const auto ok = static_cast<double>(report.estimates.size());
    if (ok > 0) {
        report.mean_gamma = std::accumulate(report.estimates.begin(), report.estimates.end(), 0.0) / ok;
        report.relative_bias = (report.mean_gamma - report.true_gamma) / report.true_gamma;
        report.coverage = static_cast<double>(covered) / ok;
        report.mean_ci_width = width_sum / ok;
    }
    return report;
}

}  // namespace vgrowth
