#include "vgrowth/dynamics.hpp"

#include <cmath>
#include <string>

#include "vgrowth/error.hpp"

namespace vgrowth {

Proportion::Proportion(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "proportion " + std::to_string(value) + " outside [0, 1]");
    }
}

Advantage::Advantage(double value, double period_days) : value_(value), period_days_(period_days) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::InvalidArgument, "advantage must be positive and finite");
    }
    if (!(period_days > 0.0) || !std::isfinite(period_days)) {
        throw Error(ErrorCode::NonPositivePeriod, "advantage period must be positive");
    }
}

double Advantage::log_value() const { return std::log(value_); }

double logistic(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Proportion step_lambda(Proportion lambda, const Advantage& gamma) {
    const double l = lambda.value();
    const double grown = gamma.value() * l;
    const double next = grown / ((1.0 - l) + grown);
    return Proportion(std::fmin(1.0, std::fmax(0.0, next)));
}

Proportion lambda_at(const ModelParams& params, double t) {
    return Proportion(logistic(params.alpha + params.beta * t));
}

double odds(Proportion lambda) {
    if (lambda.value() >= 1.0) throw Error(ErrorCode::BoundaryOdds, "odds undefined at lambda = 1");
    return lambda.value() / (1.0 - lambda.value());
}

double log_odds(Proportion lambda) {
    const double l = lambda.value();
    if (l <= 0.0 || l >= 1.0) {
        throw Error(ErrorCode::BoundaryOdds, "log-odds undefined at lambda = " + std::to_string(l));
    }
    return std::log(l) - std::log1p(-l);
}

Proportion proportion_from_log_odds(double log_odds) { return Proportion(logistic(log_odds)); }

Proportion proportion_from_odds(double odds) {
    if (!(odds >= 0.0)) throw Error(ErrorCode::InvalidArgument, "odds must be non-negative");
    if (std::isinf(odds)) return Proportion(1.0);
    return Proportion(odds / (1.0 + odds));
}

Advantage rescale_advantage(const Advantage& gamma, double target_days) {
    if (!(target_days > 0.0) || !std::isfinite(target_days)) {
        throw Error(ErrorCode::NonPositivePeriod, "target period must be positive");
    }
    if (target_days == gamma.period_days()) return gamma;
    return Advantage(std::exp(target_days / gamma.period_days() * gamma.log_value()), target_days);
}

}  // namespace vgrowth
