#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "vgrowth/data_model.hpp"
#include "vgrowth/dynamics.hpp"

namespace vgrowth {

struct FitOptions {
    double tolerance = 1e-8;  // max-abs score at the optimum
    int max_iterations = 100;
    std::optional<ModelParams> initial;
};

struct FittedPoint {
    std::int64_t t_index;
    double lambda;
};

struct FitResult {
    ModelParams params;
    double log_likelihood = 0.0;  // without the binomial-coefficient constant
    int iterations = 0;
    bool converged = false;
    double score_norm = 0.0;
    std::vector<FittedPoint> fitted;
    double period_days = kDefaultPeriodDays;

    // exp(beta) per observation period.
    Advantage gamma() const { return Advantage(std::exp(params.beta), period_days); }
};

// sum_t X_t log l_t + (N_t - X_t) log(1 - l_t).
double log_likelihood(const SurveillanceSeries& series, const ModelParams& params);

// Gradient of log_likelihood with respect to (alpha, beta):
// sum_t (X_t - N_t l_t) (1, t). This is the negative of the per-period
// expression (N_t l_t - X_t)(1, t) sometimes quoted for the score; the sign
// used here is the one that matches finite differences of log_likelihood.
Eigen::Vector2d score(const SurveillanceSeries& series, const ModelParams& params);

// Per-period gradient contributions, one per record (zero for N_t = 0).
std::vector<Eigen::Vector2d> period_scores(const SurveillanceSeries& series, const ModelParams& params);

// -sum_t N_t l_t (1 - l_t) [[1, t], [t, t^2]].
Eigen::Matrix2d hessian(const SurveillanceSeries& series, const ModelParams& params);

// Number of distinct periods with N_t > 0.
std::size_t informative_periods(const SurveillanceSeries& series);

// Maximum likelihood by damped Newton with step halving. Throws Separation,
// Singular or MaxIterations.
FitResult fit(const SurveillanceSeries& series, const FitOptions& options = {});

// Unweighted least-squares line through the Haldane-corrected empirical
// log-odds log((X + 0.5) / (N - X + 0.5)); the Newton starting point.
ModelParams initial_guess(const SurveillanceSeries& series);

}  // namespace vgrowth
