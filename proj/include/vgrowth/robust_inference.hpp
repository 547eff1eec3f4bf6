#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "vgrowth/data_model.hpp"
#include "vgrowth/dynamics.hpp"
#include "vgrowth/estimation.hpp"

namespace vgrowth {

inline constexpr int kDefaultBandwidth = 4;
inline constexpr double kDefaultLevel = 0.95;

struct VarianceKind {
    enum class Estimator { Fisher, Sandwich };
    Estimator estimator = Estimator::Fisher;
    int bandwidth = 0;  // HAC bandwidth K; meaningful for Sandwich only

    static VarianceKind fisher() { return {Estimator::Fisher, 0}; }
    static VarianceKind sandwich(int k) { return {Estimator::Sandwich, k}; }
    bool operator==(const VarianceKind&) const = default;
};

// Covariance of the parameter estimates, e.g. (alpha, beta) for a binomial fit.
struct VarianceEstimate {
    VarianceKind kind;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd estimate;  // the parameter vector the matrix was computed at

    double std_error(Eigen::Index i) const;
};

// Parzen kernel: 1 - 6x^2 + 6|x|^3 on |x| <= 1/2, 2(1 - |x|)^3 on (1/2, 1], 0 beyond.
double parzen_kernel(double x) noexcept;

// Kernel weight applied to score autocovariances at `lag` periods for
// bandwidth K. Lag j gets parzen(j / (K + 1)), so K = 0 is the plain
// outer-product estimate and lags 1..K carry weight.
double hac_weight(std::int64_t lag, int bandwidth) noexcept;

// J_K = sum_t s_t s_t' + sum over record pairs at lag d = t_b - t_a of
// w(d) (s_a s_b' + s_b s_a'). Lags are measured in t_index units.
Eigen::MatrixXd hac_meat(std::span<const Eigen::VectorXd> scores, std::span<const std::int64_t> t_index,
                         int bandwidth);

// I^-1 J I^-1 given the information matrix I and meat J.
Eigen::MatrixXd sandwich_matrix(const Eigen::MatrixXd& information, const Eigen::MatrixXd& meat);

// Inverse of I = -sum_t h_t at the fit. Throws Singular.
VarianceEstimate fisher_information(const SurveillanceSeries& series, const FitResult& fit);

// I^-1 J_K I^-1. Throws Singular or BandwidthTooLarge (K >= T).
VarianceEstimate hac_sandwich(const SurveillanceSeries& series, const FitResult& fit, int bandwidth);

VarianceEstimate variance(const SurveillanceSeries& series, const FitResult& fit, VarianceKind kind);

// Two-sided normal critical value. Exactly 1.96 at level 0.95.
double z_for_level(double level);

struct AdvantageEstimate {
    Advantage gamma;
    double ci_low;
    double ci_high;
    double level;
};

struct ParameterInterval {
    double point;
    double ci_low;
    double ci_high;
    double std_error;
    double level;
};

// Interval for alpha (index 0) or beta (index 1): point +- z * se.
ParameterInterval interval_for_parameter(const VarianceEstimate& variance, const FitResult& fit, int index,
                                         double level = kDefaultLevel);

// exp{(target_days / period_days)(beta +- z * se_beta)}.
AdvantageEstimate interval_for_gamma(const VarianceEstimate& variance, const FitResult& fit, double target_days,
                                     double level = kDefaultLevel);

enum class CompositionRule {
    // log-scale standard errors added in quadrature (independent estimates)
    IndependentLogNormal,
    // interval endpoints multiplied
    EndpointProduct,
};

std::string_view composition_rule_name(CompositionRule rule) noexcept;

// Advantage of C over A from A->B and B->C. Throws PeriodMismatch.
AdvantageEstimate compose_advantages(const AdvantageEstimate& a, const AdvantageEstimate& b,
                                     CompositionRule rule = CompositionRule::IndependentLogNormal);

}  // namespace vgrowth
