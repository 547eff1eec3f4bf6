#pragma once

#include "vgrowth/data_model.hpp"

namespace vgrowth {

inline constexpr double kDefaultGenerationDays = 4.7;

// Share of cases carrying the new variant; always in [0, 1].
class Proportion {
public:
    explicit Proportion(double value);
    double value() const noexcept { return value_; }
    bool operator==(const Proportion&) const = default;

private:
    double value_;
};

// Multiplicative advantage of the new variant over `period_days` days.
class Advantage {
public:
    Advantage(double value, double period_days);
    double value() const noexcept { return value_; }
    double period_days() const noexcept { return period_days_; }
    double log_value() const;
    bool operator==(const Advantage&) const = default;

private:
    double value_;
    double period_days_;
};

// One period of the two-variant recursion: gamma*l / ((1 - l) + gamma*l).
Proportion step_lambda(Proportion lambda, const Advantage& gamma);

// Closed form 1 / (1 + exp(-alpha - beta t)).
Proportion lambda_at(const ModelParams& params, double t);

// Numerically stable logistic map.
double logistic(double x) noexcept;

// lambda / (1 - lambda). Throws BoundaryOdds at lambda = 1.
double odds(Proportion lambda);
// log(lambda / (1 - lambda)). Throws BoundaryOdds at lambda in {0, 1}.
double log_odds(Proportion lambda);
Proportion proportion_from_log_odds(double log_odds);
Proportion proportion_from_odds(double odds);

// exp((target_days / gamma.period_days) * log gamma). Throws NonPositivePeriod.
Advantage rescale_advantage(const Advantage& gamma, double target_days);

}  // namespace vgrowth
