#include "vgrowth/multivariant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "vgrowth/error.hpp"

namespace vgrowth {

MultiSeries::MultiSeries(std::vector<Row> rows, std::vector<std::string> variant_names, double period_days)
    : rows_(std::move(rows)), names_(std::move(variant_names)), period_days_(period_days) {
    if (!(period_days_ > 0.0) || !std::isfinite(period_days_)) {
        throw Error(ErrorCode::NonPositivePeriod, "period_days must be positive");
    }
    if (names_.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 variants");
    if (rows_.size() < 2) {
        throw Error(ErrorCode::EmptySeries, "series needs at least 2 records, got " + std::to_string(rows_.size()));
    }
    std::stable_sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.t_index < b.t_index; });
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& r = rows_[i];
        if (r.counts.size() != names_.size()) {
            throw Error(ErrorCode::InvalidArgument, "row at t=" + std::to_string(r.t_index) + " has " +
                                                        std::to_string(r.counts.size()) + " counts, expected " +
                                                        std::to_string(names_.size()));
        }
        if (std::any_of(r.counts.begin(), r.counts.end(), [](std::int64_t c) { return c < 0; })) {
            throw Error(ErrorCode::CountViolation, "negative count at t=" + std::to_string(r.t_index));
        }
        if (i > 0 && r.t_index == rows_[i - 1].t_index) {
            throw Error(ErrorCode::DuplicatePeriod, "duplicate t_index " + std::to_string(r.t_index));
        }
    }
}

std::int64_t MultiSeries::total(std::size_t i) const {
    const auto& c = rows_[i].counts;
    return std::accumulate(c.begin(), c.end(), std::int64_t{0});
}

std::vector<double> MultiParams::gammas() const {
    std::vector<double> g;
    g.reserve(betas.size());
    for (double b : betas) g.push_back(std::exp(b));
    return g;
}

Eigen::VectorXd MultiParams::packed() const {
    Eigen::VectorXd theta(2 * static_cast<Eigen::Index>(betas.size()));
    for (std::size_t j = 0; j < betas.size(); ++j) {
        theta(2 * j) = alphas[j];
        theta(2 * j + 1) = betas[j];
    }
    return theta;
}

MultiParams MultiParams::unpack(const Eigen::VectorXd& theta) {
    MultiParams p;
    for (Eigen::Index j = 0; j + 1 < theta.size(); j += 2) {
        p.alphas.push_back(theta(j));
        p.betas.push_back(theta(j + 1));
    }
    return p;
}

std::vector<double> step_lambda_multi(std::span<const double> lambdas, std::span<const double> gammas) {
    if (lambdas.size() != gammas.size() + 1) {
        throw Error(ErrorCode::InvalidArgument, "need one advantage per non-numeraire variant");
    }
    std::vector<double> next(lambdas.size());
    next[0] = lambdas[0];
    for (std::size_t j = 1; j < lambdas.size(); ++j) {
        if (!(gammas[j - 1] > 0.0)) throw Error(ErrorCode::InvalidArgument, "advantages must be positive");
        next[j] = gammas[j - 1] * lambdas[j];
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& v : next) v /= total;
    return next;
}

std::vector<double> lambdas_at(const MultiParams& params, double t) {
    const std::size_t m = params.free_variants() + 1;
    std::vector<double> eta(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) eta[j] = params.alphas[j - 1] + params.betas[j - 1] * t;
    const double top = *std::max_element(eta.begin(), eta.end());
    double total = 0.0;
    for (double& e : eta) {
        e = std::exp(e - top);
        total += e;
    }
    for (double& e : eta) e /= total;
    return eta;
}

namespace {

// log-softmax, to keep log lambda finite where lambda underflows.
std::vector<double> log_lambdas_at(const MultiParams& params, double t) {
    const std::size_t m = params.free_variants() + 1;
    std::vector<double> eta(m, 0.0);
    for (std::size_t j = 1; j < m; ++j) eta[j] = params.alphas[j - 1] + params.betas[j - 1] * t;
    const double top = *std::max_element(eta.begin(), eta.end());
    double total = 0.0;
    for (double e : eta) total += std::exp(e - top);
    const double log_norm = top + std::log(total);
    for (double& e : eta) e -= log_norm;
    return eta;
}

void check_dimensions(const MultiSeries& series, const MultiParams& params) {
    if (params.free_variants() + 1 != series.variants() || params.alphas.size() != params.betas.size()) {
        throw Error(ErrorCode::InvalidArgument, "parameter dimension does not match the number of variants");
    }
}

MultiParams initial_multi_guess(const MultiSeries& series) {
    const std::size_t m = series.variants();
    MultiParams p;
    for (std::size_t j = 1; j < m; ++j) {
        double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
        for (const auto& r : series.rows()) {
            if (std::accumulate(r.counts.begin(), r.counts.end(), std::int64_t{0}) == 0) continue;
            const auto t = static_cast<double>(r.t_index);
            const double y = std::log((static_cast<double>(r.counts[j]) + 0.5) / (static_cast<double>(r.counts[0]) + 0.5));
            n += 1;
            st += t;
            sy += y;
            stt += t * t;
            sty += t * y;
        }
        const double denom = n * stt - st * st;
        const double beta = denom > 0 ? (n * sty - st * sy) / denom : 0.0;
        p.betas.push_back(beta);
        p.alphas.push_back(n > 0 ? (sy - beta * st) / n : 0.0);
    }
    return p;
}

}  // namespace

double multi_log_likelihood(const MultiSeries& series, const MultiParams& params) {
    check_dimensions(series, params);
    double total = 0.0;
    for (const auto& r : series.rows()) {
        const auto logl = log_lambdas_at(params, static_cast<double>(r.t_index));
        for (std::size_t j = 0; j < r.counts.size(); ++j) {
            if (r.counts[j] > 0) total += static_cast<double>(r.counts[j]) * logl[j];
        }
    }
    return total;
}

std::vector<Eigen::VectorXd> multi_period_scores(const MultiSeries& series, const MultiParams& params) {
    check_dimensions(series, params);
    const std::size_t m = series.variants();
    std::vector<Eigen::VectorXd> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& r = series[i];
        const auto t = static_cast<double>(r.t_index);
        const auto lam = lambdas_at(params, t);
        const auto n = static_cast<double>(series.total(i));
        Eigen::VectorXd s(2 * static_cast<Eigen::Index>(m - 1));
        for (std::size_t j = 1; j < m; ++j) {
            const double resid = static_cast<double>(r.counts[j]) - n * lam[j];
            s(2 * (j - 1)) = resid;
            s(2 * (j - 1) + 1) = resid * t;
        }
        out.push_back(std::move(s));
    }
    return out;
}

Eigen::VectorXd multi_score(const MultiSeries& series, const MultiParams& params) {
    Eigen::VectorXd total = Eigen::VectorXd::Zero(2 * static_cast<Eigen::Index>(params.free_variants()));
    for (const auto& s : multi_period_scores(series, params)) total += s;
    return total;
}

Eigen::MatrixXd multi_hessian(const MultiSeries& series, const MultiParams& params) {
    check_dimensions(series, params);
    const std::size_t m = series.variants();
    const auto dim = 2 * static_cast<Eigen::Index>(m - 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto t = static_cast<double>(series[i].t_index);
        const auto n = static_cast<double>(series.total(i));
        if (n == 0) continue;
        const auto lam = lambdas_at(params, t);
        const Eigen::Matrix2d design{{1.0, t}, {t, t * t}};
        for (std::size_t j = 1; j < m; ++j) {
            for (std::size_t k = 1; k < m; ++k) {
                const double cov = (j == k ? lam[j] : 0.0) - lam[j] * lam[k];
                h.block<2, 2>(2 * (j - 1), 2 * (k - 1)) -= n * cov * design;
            }
        }
    }
    return h;
}

MultiFitResult fit_multi(const MultiSeries& series, const FitOptions& options) {
    const std::size_t m = series.variants();
    std::size_t informative = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.total(i) > 0) ++informative;
    }
    if (informative < 2) throw Error(ErrorCode::Singular, "need at least 2 periods with sequenced cases");
    for (std::size_t j = 0; j < m; ++j) {
        std::int64_t own = 0, all = 0;
        for (std::size_t i = 0; i < series.size(); ++i) {
            own += series[i].counts[j];
            all += series.total(i);
        }
        if (own == 0 || own == all) {
            throw Error(ErrorCode::Separation, "variant '" + series.variant_names()[j] +
                                                   (own == 0 ? "' never observed" : "' is every observed case") +
                                                   "; MLE diverges");
        }
    }

    MultiParams theta = initial_multi_guess(series);
    double ll = multi_log_likelihood(series, theta);
    Eigen::VectorXd g = multi_score(series, theta);
    int iter = 0;
    bool converged = g.cwiseAbs().maxCoeff() <= options.tolerance;
    while (!converged && iter < options.max_iterations) {
        ++iter;
        const Eigen::MatrixXd info = -multi_hessian(series, theta);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().minCoeff() <= 1e-12 * ldlt.vectorD().maxCoeff()) {
            throw Error(ErrorCode::Singular, "information matrix not positive definite");
        }
        const Eigen::VectorXd step = ldlt.solve(g);
        const Eigen::VectorXd base = theta.packed();
        double scale = 1.0;
        MultiParams next = MultiParams::unpack(base + step);
        double next_ll = multi_log_likelihood(series, next);
        for (int halvings = 0; !(next_ll >= ll - 1e-12 * std::abs(ll)) && halvings < 60; ++halvings) {
            scale *= 0.5;
            next = MultiParams::unpack(base + scale * step);
            next_ll = multi_log_likelihood(series, next);
        }
        theta = std::move(next);
        ll = next_ll;
        g = multi_score(series, theta);
        if (theta.packed().cwiseAbs().maxCoeff() > 1e6) {
            throw Error(ErrorCode::Separation, "estimates diverging; data are separated");
        }
        converged = g.cwiseAbs().maxCoeff() <= options.tolerance;
    }
    if (!converged) {
        throw Error(ErrorCode::MaxIterations, "no convergence after " + std::to_string(iter) + " iterations");
    }
    return {std::move(theta), ll, iter, true, g.cwiseAbs().maxCoeff(), series.period_days()};
}

VarianceEstimate multi_variance(const MultiSeries& series, const MultiFitResult& fit, VarianceKind kind) {
    const Eigen::MatrixXd info = -multi_hessian(series, fit.params);
    if (kind.estimator == VarianceKind::Estimator::Fisher) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
        if (!lu.isInvertible()) throw Error(ErrorCode::Singular, "information matrix is singular");
        Eigen::MatrixXd inv = lu.inverse();
        return {kind, 0.5 * (inv + inv.transpose()), fit.params.packed()};
    }
    if (kind.bandwidth < 0) throw Error(ErrorCode::InvalidArgument, "bandwidth must be non-negative");
    if (static_cast<std::size_t>(kind.bandwidth) >= series.size()) {
        throw Error(ErrorCode::BandwidthTooLarge, "bandwidth must be below the series length");
    }
    const auto scores = multi_period_scores(series, fit.params);
    std::vector<std::int64_t> ts;
    for (const auto& r : series.rows()) ts.push_back(r.t_index);
    return {kind, sandwich_matrix(info, hac_meat(scores, ts, kind.bandwidth)), fit.params.packed()};
}

AdvantageEstimate interval_for_multi_gamma(const VarianceEstimate& variance, const MultiFitResult& fit,
                                           std::size_t variant, double target_days, double level) {
    if (variant < 1 || variant > fit.params.free_variants()) {
        throw Error(ErrorCode::InvalidIndex, "variant index must lie in 1.." + std::to_string(fit.params.free_variants()));
    }
    if (!(target_days > 0.0)) throw Error(ErrorCode::NonPositivePeriod, "target period must be positive");
    const double z = z_for_level(level);
    const double beta = fit.params.betas[variant - 1];
    const double se = variance.std_error(static_cast<Eigen::Index>(2 * variant - 1));
    const double k = target_days / fit.period_days;
    return {Advantage(std::exp(k * beta), target_days), std::exp(k * (beta - z * se)), std::exp(k * (beta + z * se)),
            level};
}

SurveillanceSeries marginalize(const MultiSeries& series, std::size_t a, std::size_t b) {
    if (a >= series.variants() || b >= series.variants() || a == b) {
        throw Error(ErrorCode::InvalidIndex, "marginalize needs two distinct variant indices below " +
                                                 std::to_string(series.variants()));
    }
    std::vector<ObservationRecord> records;
    records.reserve(series.size());
    for (const auto& r : series.rows()) {
        records.push_back({r.t_index, r.label, r.counts[a] + r.counts[b], r.counts[b], std::nullopt, std::nullopt});
    }
    return SurveillanceSeries(std::move(records), series.period_days());
}

MultiSeries with_numeraire(const MultiSeries& series, std::size_t index) {
    if (index >= series.variants()) throw Error(ErrorCode::InvalidIndex, "variant index out of range");
    auto rows = series.rows();
    auto names = series.variant_names();
    for (auto& r : rows) std::rotate(r.counts.begin(), r.counts.begin() + static_cast<std::ptrdiff_t>(index),
                                     r.counts.begin() + static_cast<std::ptrdiff_t>(index) + 1);
    std::rotate(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(index),
                names.begin() + static_cast<std::ptrdiff_t>(index) + 1);
    return MultiSeries(std::move(rows), std::move(names), series.period_days());
}

MultiSeries read_multi_csv(std::istream& in, double period_days) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "missing header");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = detail::split_csv_line(line);
    if (header.size() < 4 || header[0] != "t" || header[1] != "label") {
        throw Error(ErrorCode::ParseError, "header must be t,label,<variant 1>,...,<variant m> with m >= 2");
    }
    std::vector<std::string> names(header.begin() + 2, header.end());
    std::vector<MultiSeries::Row> rows;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != header.size()) {
            throw Error(ErrorCode::ParseError, "row " + std::to_string(row) + ": expected " +
                                                   std::to_string(header.size()) + " fields, got " +
                                                   std::to_string(f.size()));
        }
        MultiSeries::Row r;
        r.t_index = *detail::parse_count(f[0], row, "t", false);
        r.label = f[1];
        for (std::size_t j = 2; j < f.size(); ++j) r.counts.push_back(*detail::parse_count(f[j], row, header[j], false));
        rows.push_back(std::move(r));
    }
    return MultiSeries(std::move(rows), std::move(names), period_days);
}

MultiSeries load_multi_csv(const std::filesystem::path& path, double period_days) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return read_multi_csv(in, period_days);
}

void write_multi_csv(std::ostream& out, const MultiSeries& series) {
    out << "t,label";
    for (const auto& n : series.variant_names()) out << ',' << n;
    out << '\n';
    for (const auto& r : series.rows()) {
        out << r.t_index << ',' << r.label;
        for (auto c : r.counts) out << ',' << c;
        out << '\n';
    }
}

MultiSeries to_multi(const SurveillanceSeries& series) {
    std::vector<MultiSeries::Row> rows;
    rows.reserve(series.size());
    for (const auto& r : series) {
        rows.push_back({r.t_index, r.label, {r.sequenced - r.variant_count, r.variant_count}});
    }
    return MultiSeries(std::move(rows), {"incumbent", "variant"}, series.period_days());
}

}  // namespace vgrowth
