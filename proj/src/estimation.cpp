#include "vgrowth/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vgrowth/error.hpp"

namespace vgrowth {

namespace {

// log(logistic(x)) without overflow.
double log_sigmoid(double x) {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double max_abs(const Eigen::Vector2d& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

double log_likelihood(const SurveillanceSeries& series, const ModelParams& params) {
    double total = 0.0;
    for (const auto& r : series) {
        if (r.sequenced == 0) continue;
        const double eta = params.alpha + params.beta * static_cast<double>(r.t_index);
        const auto x = static_cast<double>(r.variant_count);
        const auto rest = static_cast<double>(r.sequenced - r.variant_count);
        if (x > 0) total += x * log_sigmoid(eta);
        if (rest > 0) total += rest * log_sigmoid(-eta);
    }
    return total;
}

std::vector<Eigen::Vector2d> period_scores(const SurveillanceSeries& series, const ModelParams& params) {
    std::vector<Eigen::Vector2d> out;
    out.reserve(series.size());
    for (const auto& r : series) {
        const auto t = static_cast<double>(r.t_index);
        const double lambda = logistic(params.alpha + params.beta * t);
        const double resid =
            static_cast<double>(r.variant_count) - static_cast<double>(r.sequenced) * lambda;
        out.emplace_back(resid, resid * t);
    }
    return out;
}

Eigen::Vector2d score(const SurveillanceSeries& series, const ModelParams& params) {
    Eigen::Vector2d total = Eigen::Vector2d::Zero();
    for (const auto& s : period_scores(series, params)) total += s;
    return total;
}

Eigen::Matrix2d hessian(const SurveillanceSeries& series, const ModelParams& params) {
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (const auto& r : series) {
        const auto t = static_cast<double>(r.t_index);
        const double lambda = logistic(params.alpha + params.beta * t);
        const double w = static_cast<double>(r.sequenced) * lambda * (1.0 - lambda);
        h(0, 0) -= w;
        h(0, 1) -= w * t;
        h(1, 1) -= w * t * t;
    }
    h(1, 0) = h(0, 1);
    return h;
}

std::size_t informative_periods(const SurveillanceSeries& series) {
    std::size_t n = 0;
    for (const auto& r : series) {
        if (r.sequenced > 0) ++n;
    }
    return n;
}

ModelParams initial_guess(const SurveillanceSeries& series) {
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (const auto& r : series) {
        if (r.sequenced == 0) continue;
        const auto t = static_cast<double>(r.t_index);
        const double y = std::log((static_cast<double>(r.variant_count) + 0.5) /
                                  (static_cast<double>(r.sequenced - r.variant_count) + 0.5));
        n += 1;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double denom = n * stt - st * st;
    if (n < 2 || denom <= 0) return {};
    const double beta = (n * sty - st * sy) / denom;
    return {(sy - beta * st) / n, beta};
}

namespace {

// True when a cut point in time puts every all-incumbent period on one side
// and every all-variant period on the other, with at most one mixed period
// at the cut. The likelihood then increases without bound in |beta|.
bool time_separated(const SurveillanceSeries& series) {
    // 0: no variant, 1: mixed, 2: all variant; records are sorted by t.
    std::vector<int> cls;
    int mixed = 0;
    for (const auto& r : series) {
        if (r.sequenced == 0) continue;
        const int c = r.variant_count == 0 ? 0 : (r.variant_count == r.sequenced ? 2 : 1);
        mixed += c == 1;
        cls.push_back(c);
    }
    if (mixed > 1) return false;
    return std::is_sorted(cls.begin(), cls.end()) || std::is_sorted(cls.rbegin(), cls.rend());
}

}  // namespace

FitResult fit(const SurveillanceSeries& series, const FitOptions& options) {
    if (informative_periods(series) < 2) {
        throw Error(ErrorCode::Singular, "need at least 2 periods with sequenced cases");
    }
    std::int64_t sum_x = 0, sum_n = 0;
    for (const auto& r : series) {
        sum_x += r.variant_count;
        sum_n += r.sequenced;
    }
    if (sum_x == 0 || sum_x == sum_n) {
        throw Error(ErrorCode::Separation,
                    sum_x == 0 ? "no variant cases observed; MLE diverges" : "variant in every sequenced case; MLE diverges");
    }

    if (time_separated(series)) {
        throw Error(ErrorCode::Separation, "periods are perfectly separated in time; MLE diverges");
    }

    ModelParams theta = options.initial.value_or(initial_guess(series));
    double ll = log_likelihood(series, theta);
    Eigen::Vector2d g = score(series, theta);
    int iter = 0;
    bool converged = max_abs(g) <= options.tolerance;

    while (!converged && iter < options.max_iterations) {
        ++iter;
        const Eigen::Matrix2d h = hessian(series, theta);
        const double det = h.determinant();
        if (!(h(0, 0) < 0.0) || !(det > 0.0) || !std::isfinite(det)) {
            throw Error(ErrorCode::Singular, "Hessian not negative definite at iteration " + std::to_string(iter));
        }
        const Eigen::Vector2d step = -h.inverse() * g;
        double scale = 1.0;
        ModelParams next{theta.alpha + step(0), theta.beta + step(1)};
        double next_ll = log_likelihood(series, next);
        for (int halvings = 0; !(next_ll >= ll - 1e-12 * std::abs(ll)) && halvings < 60; ++halvings) {
            scale *= 0.5;
            next = {theta.alpha + scale * step(0), theta.beta + scale * step(1)};
            next_ll = log_likelihood(series, next);
        }
        theta = next;
        ll = next_ll;
        g = score(series, theta);
        if (std::abs(theta.beta) > 1e3 || std::abs(theta.alpha) > 1e6) {
            throw Error(ErrorCode::Separation, "estimates diverging; data are separated");
        }
        converged = max_abs(g) <= options.tolerance;
    }
    if (!converged) {
        throw Error(ErrorCode::MaxIterations,
                    "no convergence after " + std::to_string(iter) + " iterations (score " + std::to_string(max_abs(g)) + ")");
    }

    FitResult result;
    result.params = theta;
    result.log_likelihood = ll;
    result.iterations = iter;
    result.converged = true;
    result.score_norm = max_abs(g);
    result.period_days = series.period_days();
    result.fitted.reserve(series.size());
    for (const auto& r : series) {
        result.fitted.push_back({r.t_index, lambda_at(theta, static_cast<double>(r.t_index)).value()});
    }
    return result;
}

}  // namespace vgrowth
