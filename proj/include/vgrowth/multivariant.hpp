#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vgrowth/data_model.hpp"
#include "vgrowth/estimation.hpp"
#include "vgrowth/robust_inference.hpp"

namespace vgrowth {

// Per-period counts for m >= 2 competing variants. Column 0 is the numeraire.
class MultiSeries {
public:
    struct Row {
        std::int64_t t_index = 0;
        std::string label;
        std::vector<std::int64_t> counts;

        bool operator==(const Row&) const = default;
    };

    // Sorts rows by t_index. Throws EmptySeries, CountViolation,
    // DuplicatePeriod, NonPositivePeriod or InvalidArgument (ragged rows).
    MultiSeries(std::vector<Row> rows, std::vector<std::string> variant_names,
                double period_days = kDefaultPeriodDays);

    std::size_t size() const noexcept { return rows_.size(); }
    std::size_t variants() const noexcept { return names_.size(); }
    const Row& operator[](std::size_t i) const { return rows_[i]; }
    const std::vector<Row>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& variant_names() const noexcept { return names_; }
    double period_days() const noexcept { return period_days_; }
    std::int64_t total(std::size_t i) const;

    bool operator==(const MultiSeries&) const = default;

private:
    std::vector<Row> rows_;
    std::vector<std::string> names_;
    double period_days_;
};

// Linear predictors alpha_j + beta_j t for variants 1..m-1 relative to the
// numeraire; gamma_j = exp(beta_j).
struct MultiParams {
    std::vector<double> alphas;
    std::vector<double> betas;

    std::size_t free_variants() const noexcept { return betas.size(); }
    std::vector<double> gammas() const;
    // (alpha_1, beta_1, alpha_2, beta_2, ...)
    Eigen::VectorXd packed() const;
    static MultiParams unpack(const Eigen::VectorXd& theta);
};

struct MultiFitResult {
    MultiParams params;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    double score_norm = 0.0;
    double period_days = kDefaultPeriodDays;
};

// lambda_j' = gamma_j lambda_j / sum_k gamma_k lambda_k, with `gammas` holding
// the m - 1 advantages of the non-numeraire variants.
std::vector<double> step_lambda_multi(std::span<const double> lambdas, std::span<const double> gammas);

// Softmax proportions at time t.
std::vector<double> lambdas_at(const MultiParams& params, double t);

double multi_log_likelihood(const MultiSeries& series, const MultiParams& params);
std::vector<Eigen::VectorXd> multi_period_scores(const MultiSeries& series, const MultiParams& params);
Eigen::VectorXd multi_score(const MultiSeries& series, const MultiParams& params);
Eigen::MatrixXd multi_hessian(const MultiSeries& series, const MultiParams& params);

// Multinomial-logistic maximum likelihood. Throws Separation, Singular or
// MaxIterations.
MultiFitResult fit_multi(const MultiSeries& series, const FitOptions& options = {});

// Fisher or HAC sandwich covariance of the packed parameters.
VarianceEstimate multi_variance(const MultiSeries& series, const MultiFitResult& fit, VarianceKind kind);

// exp{(target_days / period_days)(beta_j +- z se)} for non-numeraire variant
// `variant` (1-based column index, 1..m-1). Throws InvalidIndex.
AdvantageEstimate interval_for_multi_gamma(const VarianceEstimate& variance, const MultiFitResult& fit,
                                           std::size_t variant, double target_days, double level = kDefaultLevel);

// Two-variant series with N_t = X_a + X_b and X_t = X_b (0-based indices).
// Throws InvalidIndex.
SurveillanceSeries marginalize(const MultiSeries& series, std::size_t a, std::size_t b);

// Same counts with variant `index` moved to the numeraire column.
MultiSeries with_numeraire(const MultiSeries& series, std::size_t index);

// Header `t,label,<variant 1>,...,<variant m>`.
MultiSeries read_multi_csv(std::istream& in, double period_days = kDefaultPeriodDays);
MultiSeries load_multi_csv(const std::filesystem::path& path, double period_days = kDefaultPeriodDays);
void write_multi_csv(std::ostream& out, const MultiSeries& series);

// Binary series viewed as two variants (incumbent, new).
MultiSeries to_multi(const SurveillanceSeries& series);

}  // namespace vgrowth
