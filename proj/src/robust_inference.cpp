#include "vgrowth/robust_inference.hpp"

#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "vgrowth/error.hpp"

namespace vgrowth {

double VarianceEstimate::std_error(Eigen::Index i) const { return std::sqrt(std::fmax(0.0, matrix(i, i))); }

double parzen_kernel(double x) noexcept {
    const double a = std::abs(x);
    if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
    if (a <= 1.0) return 2.0 * (1.0 - a) * (1.0 - a) * (1.0 - a);
    return 0.0;
}

double hac_weight(std::int64_t lag, int bandwidth) noexcept {
    if (lag <= 0) return lag == 0 ? 1.0 : 0.0;
    return parzen_kernel(static_cast<double>(lag) / static_cast<double>(bandwidth + 1));
}

Eigen::MatrixXd hac_meat(std::span<const Eigen::VectorXd> scores, std::span<const std::int64_t> t_index,
                         int bandwidth) {
    if (scores.size() != t_index.size()) {
        throw Error(ErrorCode::InvalidArgument, "scores and t_index differ in length");
    }
    if (scores.empty()) throw Error(ErrorCode::InvalidArgument, "no scores");
    const Eigen::Index dim = scores.front().size();
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& s : scores) meat.noalias() += s * s.transpose();
    if (bandwidth <= 0) return meat;
    for (std::size_t a = 0; a < scores.size(); ++a) {
        for (std::size_t b = a + 1; b < scores.size(); ++b) {
            const std::int64_t lag = t_index[b] - t_index[a];
            if (lag > bandwidth) break;
            const double w = hac_weight(lag, bandwidth);
            if (w == 0.0) continue;
            const Eigen::MatrixXd cross = scores[a] * scores[b].transpose();
            meat += w * (cross + cross.transpose());
        }
    }
    return meat;
}

namespace {

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& information) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(information);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) throw Error(ErrorCode::Singular, "information matrix is singular");
    Eigen::MatrixXd inv = lu.inverse();
    return 0.5 * (inv + inv.transpose());
}

Eigen::MatrixXd information_at(const SurveillanceSeries& series, const FitResult& fit) {
    return -hessian(series, fit.params);
}

Eigen::VectorXd estimate_of(const FitResult& fit) {
    Eigen::VectorXd v(2);
    v << fit.params.alpha, fit.params.beta;
    return v;
}

}  // namespace

Eigen::MatrixXd sandwich_matrix(const Eigen::MatrixXd& information, const Eigen::MatrixXd& meat) {
    const Eigen::MatrixXd bread = checked_inverse(information);
    Eigen::MatrixXd out = bread * meat * bread;
    return 0.5 * (out + out.transpose());
}

VarianceEstimate fisher_information(const SurveillanceSeries& series, const FitResult& fit) {
    return {VarianceKind::fisher(), checked_inverse(information_at(series, fit)), estimate_of(fit)};
}

VarianceEstimate hac_sandwich(const SurveillanceSeries& series, const FitResult& fit, int bandwidth) {
    if (bandwidth < 0) throw Error(ErrorCode::InvalidArgument, "bandwidth must be non-negative");
    if (static_cast<std::size_t>(bandwidth) >= series.size()) {
        throw Error(ErrorCode::BandwidthTooLarge, "bandwidth " + std::to_string(bandwidth) +
                                                      " must be below the series length " +
                                                      std::to_string(series.size()));
    }
    std::vector<Eigen::VectorXd> scores;
    std::vector<std::int64_t> ts;
    scores.reserve(series.size());
    ts.reserve(series.size());
    const auto per_period = period_scores(series, fit.params);
    for (std::size_t i = 0; i < series.size(); ++i) {
        scores.emplace_back(per_period[i]);
        ts.push_back(series[i].t_index);
    }
    const Eigen::MatrixXd meat = hac_meat(scores, ts, bandwidth);
    return {VarianceKind::sandwich(bandwidth), sandwich_matrix(information_at(series, fit), meat), estimate_of(fit)};
}

VarianceEstimate variance(const SurveillanceSeries& series, const FitResult& fit, VarianceKind kind) {
    if (kind.estimator == VarianceKind::Estimator::Fisher) return fisher_information(series, fit);
    return hac_sandwich(series, fit, kind.bandwidth);
}

double z_for_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "level must lie in (0, 1)");
    }
    if (std::abs(level - 0.95) < 1e-12) return 1.96;
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

ParameterInterval interval_for_parameter(const VarianceEstimate& variance, const FitResult& fit, int index,
                                         double level) {
    if (index < 0 || index > 1) throw Error(ErrorCode::InvalidIndex, "parameter index must be 0 or 1");
    const double z = z_for_level(level);
    const double point = index == 0 ? fit.params.alpha : fit.params.beta;
    const double se = variance.std_error(index);
    return {point, point - z * se, point + z * se, se, level};
}

AdvantageEstimate interval_for_gamma(const VarianceEstimate& variance, const FitResult& fit, double target_days,
                                     double level) {
    if (!(target_days > 0.0)) throw Error(ErrorCode::NonPositivePeriod, "target period must be positive");
    const double z = z_for_level(level);
    const double ratio = target_days / fit.period_days;
    const double beta = fit.params.beta;
    const double se = variance.std_error(1);
    return {Advantage(std::exp(ratio * beta), target_days), std::exp(ratio * (beta - z * se)),
            std::exp(ratio * (beta + z * se)), level};
}

std::string_view composition_rule_name(CompositionRule rule) noexcept {
    switch (rule) {
        case CompositionRule::IndependentLogNormal: return "independent-lognormal";
        case CompositionRule::EndpointProduct: return "endpoint-product";
    }
    return "unknown";
}

AdvantageEstimate compose_advantages(const AdvantageEstimate& a, const AdvantageEstimate& b, CompositionRule rule) {
    if (std::abs(a.gamma.period_days() - b.gamma.period_days()) > 1e-12) {
        throw Error(ErrorCode::PeriodMismatch, "cannot compose advantages over " +
                                                   std::to_string(a.gamma.period_days()) + " and " +
                                                   std::to_string(b.gamma.period_days()) + " days");
    }
    if (std::abs(a.level - b.level) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "cannot compose intervals at different levels");
    }
    const Advantage point(a.gamma.value() * b.gamma.value(), a.gamma.period_days());
    if (rule == CompositionRule::EndpointProduct) {
        return {point, a.ci_low * b.ci_low, a.ci_high * b.ci_high, a.level};
    }
    const double z = z_for_level(a.level);
    const double sa = std::log(a.ci_high / a.ci_low) / (2.0 * z);
    const double sb = std::log(b.ci_high / b.ci_low) / (2.0 * z);
    const double s = std::hypot(sa, sb);
    return {point, point.value() * std::exp(-z * s), point.value() * std::exp(z * s), a.level};
}

}  // namespace vgrowth
