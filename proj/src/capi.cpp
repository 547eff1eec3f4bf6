#include "vgrowth/vgrowth.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>
#include <utility>

#include "vgrowth/crude_measures.hpp"
#include "vgrowth/data_model.hpp"
#include "vgrowth/dynamics.hpp"
#include "vgrowth/error.hpp"
#include "vgrowth/estimation.hpp"
#include "vgrowth/forecasting.hpp"
#include "vgrowth/multivariant.hpp"
#include "vgrowth/repro.hpp"
#include "vgrowth/robust_inference.hpp"
#include "vgrowth/simulation.hpp"

struct vg_series {
    vgrowth::SurveillanceSeries value;
};
struct vg_fit {
    vgrowth::FitResult value;
};
struct vg_variance {
    vgrowth::VarianceEstimate value;
};
struct vg_multi_series {
    vgrowth::MultiSeries value;
};
struct vg_multi_fit {
    vgrowth::MultiFitResult value;
};

namespace {

using vgrowth::Error;
using vgrowth::ErrorCode;

thread_local std::string t_last_error;

vg_status fail(vg_status status, std::string message) {
    t_last_error = std::move(message);
    return status;
}

template <class F>
vg_status guarded(F&& body) {
    try {
        body();
        return VG_OK;
    } catch (const Error& e) {
        return fail(static_cast<vg_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(VG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(VG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(VG_ERR_INTERNAL, "unknown failure");
    }
}

void require(bool condition, const char* what) {
    if (!condition) throw Error(ErrorCode::InvalidArgument, what);
}

vgrowth::FitOptions to_options(const vg_fit_options* options) {
    vgrowth::FitOptions out;
    if (options == nullptr) return out;
    out.tolerance = options->tolerance;
    out.max_iterations = options->max_iterations;
    if (options->has_initial) out.initial = vgrowth::ModelParams{options->initial_alpha, options->initial_beta};
    return out;
}

vgrowth::SimConfig to_config(const vg_sim_config* c) {
    require(c != nullptr, "config is null");
    if (c->n_variants < 2) throw vgrowth::Error(vgrowth::ErrorCode::InvalidConfig, "need at least 2 variants");
    require(c->gammas && c->initial && c->sequenced, "config arrays must be non-null");
    vgrowth::SimConfig out;
    out.gammas.assign(c->gammas, c->gammas + (c->n_variants - 1));
    out.initial.assign(c->initial, c->initial + c->n_variants);
    out.sequenced.assign(c->sequenced, c->sequenced + c->n_periods);
    out.seed = c->seed;
    if (c->growth) out.growth.assign(c->growth, c->growth + c->n_periods);
    out.initial_cases = c->initial_cases;
    out.period_days = c->period_days;
    return out;
}

vg_interval to_c(const vgrowth::AdvantageEstimate& a) {
    return {a.gamma.value(), a.ci_low, a.ci_high, a.level, a.gamma.period_days(), 0.0};
}

vgrowth::AdvantageEstimate from_c(const vg_interval& i) {
    return {vgrowth::Advantage(i.point, i.period_days), i.low, i.high, i.level};
}

template <class Row, class Source, class Convert>
void copy_rows(const Source& source, Row* rows, std::size_t capacity, std::size_t* count, Convert convert) {
    require(count != nullptr, "count is null");
    *count = source.size();
    if (rows == nullptr) return;
    if (capacity < source.size()) {
        throw Error(ErrorCode::BufferTooSmall,
                    "buffer holds " + std::to_string(capacity) + " rows, need " + std::to_string(source.size()));
    }
    for (std::size_t i = 0; i < source.size(); ++i) rows[i] = convert(source[i]);
}

void copy_text(const std::string& text, char* buffer, std::size_t capacity, std::size_t* length) {
    require(length != nullptr, "length is null");
    *length = text.size();
    if (buffer == nullptr) return;
    if (capacity < text.size() + 1) {
        throw Error(ErrorCode::BufferTooSmall,
                    "buffer holds " + std::to_string(capacity) + " bytes, need " + std::to_string(text.size() + 1));
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
}

}  // namespace

extern "C" {

const char* vg_version(void) { return VGROWTH_VERSION; }

const char* vg_status_name(vg_status status) {
    static thread_local std::string name;
    name = std::string(vgrowth::error_name(static_cast<ErrorCode>(status)));
    return name.c_str();
}

const char* vg_last_error(void) { return t_last_error.c_str(); }

vg_status vg_series_load_bundled(const char* name, vg_series** out) {
    return guarded([&] {
        require(name && out, "null argument");
        *out = new vg_series{vgrowth::load_bundled(name)};
    });
}

vg_status vg_series_load_csv(const char* path, double period_days, vg_series** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new vg_series{vgrowth::load_csv(path, period_days)};
    });
}

vg_status vg_series_create(size_t n, const int64_t* t_index, const char* const* labels, const int64_t* sequenced,
                           const int64_t* variant_count, const int64_t* total_cases, const int64_t* tested,
                           double period_days, vg_series** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        require(n == 0 || (t_index && sequenced && variant_count), "count arrays must be non-null");
        std::vector<vgrowth::ObservationRecord> records(n);
        for (size_t i = 0; i < n; ++i) {
            auto& r = records[i];
            r.t_index = t_index[i];
            r.label = labels && labels[i] ? labels[i] : std::to_string(t_index[i]);
            r.sequenced = sequenced[i];
            r.variant_count = variant_count[i];
            if (total_cases && total_cases[i] != VG_MISSING) r.total_cases = total_cases[i];
            if (tested && tested[i] != VG_MISSING) r.tested = tested[i];
        }
        *out = new vg_series{vgrowth::validate_series(std::move(records), period_days)};
    });
}

vg_status vg_series_slice(const vg_series* series, int64_t t_from, int64_t t_through, vg_series** out) {
    return guarded([&] {
        require(series && out, "null argument");
        *out = new vg_series{series->value.slice(t_from, t_through)};
    });
}

vg_status vg_series_save_csv(const vg_series* series, const char* path) {
    return guarded([&] {
        require(series && path, "null argument");
        vgrowth::save_csv(path, series->value);
    });
}

vg_status vg_series_to_csv(const vg_series* series, char* buffer, size_t capacity, size_t* length) {
    return guarded([&] {
        require(series != nullptr, "series is null");
        std::ostringstream out;
        vgrowth::write_csv(out, series->value);
        copy_text(out.str(), buffer, capacity, length);
    });
}

void vg_series_free(vg_series* series) { delete series; }

size_t vg_series_size(const vg_series* series) { return series ? series->value.size() : 0; }

double vg_series_period_days(const vg_series* series) { return series ? series->value.period_days() : 0.0; }

vg_status vg_series_record(const vg_series* series, size_t index, vg_record* out) {
    return guarded([&] {
        require(series && out, "null argument");
        if (index >= series->value.size()) throw Error(ErrorCode::InvalidIndex, "record index out of range");
        const auto& r = series->value[index];
        *out = {r.t_index, r.label.c_str(), r.sequenced, r.variant_count, r.total_cases.value_or(VG_MISSING),
                r.tested.value_or(VG_MISSING)};
    });
}

void vg_fit_options_default(vg_fit_options* options) {
    if (!options) return;
    const vgrowth::FitOptions defaults;
    *options = {defaults.tolerance, defaults.max_iterations, 0, 0.0, 0.0};
}

vg_status vg_fit_series(const vg_series* series, const vg_fit_options* options, vg_fit** out) {
    return guarded([&] {
        require(series && out, "null argument");
        *out = new vg_fit{vgrowth::fit(series->value, to_options(options))};
    });
}

void vg_fit_free(vg_fit* fit) { delete fit; }

vg_status vg_fit_get_summary(const vg_fit* fit, vg_fit_summary* out) {
    return guarded([&] {
        require(fit && out, "null argument");
        const auto& f = fit->value;
        *out = {f.params.alpha, f.params.beta, f.log_likelihood, f.iterations, f.converged ? 1 : 0,
                f.score_norm,   f.period_days};
    });
}

vg_status vg_fit_fitted(const vg_fit* fit, int64_t* t_index, double* lambda, size_t capacity, size_t* count) {
    return guarded([&] {
        require(fit && count, "null argument");
        const auto& pts = fit->value.fitted;
        *count = pts.size();
        if (!t_index && !lambda) return;
        if (capacity < pts.size()) throw Error(ErrorCode::BufferTooSmall, "buffer too small");
        for (size_t i = 0; i < pts.size(); ++i) {
            if (t_index) t_index[i] = pts[i].t_index;
            if (lambda) lambda[i] = pts[i].lambda;
        }
    });
}

vg_status vg_log_likelihood(const vg_series* series, double alpha, double beta, double* out) {
    return guarded([&] {
        require(series && out, "null argument");
        *out = vgrowth::log_likelihood(series->value, {alpha, beta});
    });
}

vg_status vg_score(const vg_series* series, double alpha, double beta, double out[2]) {
    return guarded([&] {
        require(series && out, "null argument");
        const auto g = vgrowth::score(series->value, {alpha, beta});
        out[0] = g(0);
        out[1] = g(1);
    });
}

vg_status vg_hessian(const vg_series* series, double alpha, double beta, double out[4]) {
    return guarded([&] {
        require(series && out, "null argument");
        const auto h = vgrowth::hessian(series->value, {alpha, beta});
        out[0] = h(0, 0);
        out[1] = h(0, 1);
        out[2] = h(1, 0);
        out[3] = h(1, 1);
    });
}

vg_status vg_variance_fisher(const vg_series* series, const vg_fit* fit, vg_variance** out) {
    return guarded([&] {
        require(series && fit && out, "null argument");
        *out = new vg_variance{vgrowth::fisher_information(series->value, fit->value)};
    });
}

vg_status vg_variance_hac(const vg_series* series, const vg_fit* fit, int bandwidth, vg_variance** out) {
    return guarded([&] {
        require(series && fit && out, "null argument");
        *out = new vg_variance{vgrowth::hac_sandwich(series->value, fit->value, bandwidth)};
    });
}

void vg_variance_free(vg_variance* variance) { delete variance; }

int vg_variance_bandwidth(const vg_variance* variance) {
    if (!variance || variance->value.kind.estimator == vgrowth::VarianceKind::Estimator::Fisher) return -1;
    return variance->value.kind.bandwidth;
}

size_t vg_variance_dim(const vg_variance* variance) {
    return variance ? static_cast<size_t>(variance->value.matrix.rows()) : 0;
}

vg_status vg_variance_matrix(const vg_variance* variance, double* out, size_t capacity) {
    return guarded([&] {
        require(variance && out, "null argument");
        const auto& m = variance->value.matrix;
        const auto n = static_cast<size_t>(m.rows());
        if (capacity < n * n) throw Error(ErrorCode::BufferTooSmall, "buffer too small");
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) out[i * n + j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    });
}

double vg_parzen_kernel(double x) { return vgrowth::parzen_kernel(x); }

vg_status vg_interval_parameter(const vg_fit* fit, const vg_variance* variance, int which, double level,
                                vg_interval* out) {
    return guarded([&] {
        require(fit && variance && out, "null argument");
        const auto iv = vgrowth::interval_for_parameter(variance->value, fit->value, which, level);
        *out = {iv.point, iv.ci_low, iv.ci_high, iv.level, 0.0, iv.std_error};
    });
}

vg_status vg_interval_gamma(const vg_fit* fit, const vg_variance* variance, double target_days, double level,
                            vg_interval* out) {
    return guarded([&] {
        require(fit && variance && out, "null argument");
        *out = to_c(vgrowth::interval_for_gamma(variance->value, fit->value, target_days, level));
    });
}

vg_status vg_compose_advantages(const vg_interval* a, const vg_interval* b, vg_composition rule, vg_interval* out) {
    return guarded([&] {
        require(a && b && out, "null argument");
        const auto r = rule == VG_COMPOSE_ENDPOINT_PRODUCT ? vgrowth::CompositionRule::EndpointProduct
                                                           : vgrowth::CompositionRule::IndependentLogNormal;
        *out = to_c(vgrowth::compose_advantages(from_c(*a), from_c(*b), r));
    });
}

vg_status vg_rescale_advantage(double gamma, double period_days, double target_days, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = vgrowth::rescale_advantage(vgrowth::Advantage(gamma, period_days), target_days).value();
    });
}

vg_status vg_step_lambda(double lambda, double gamma, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = vgrowth::step_lambda(vgrowth::Proportion(lambda), vgrowth::Advantage(gamma, 1.0)).value();
    });
}

vg_status vg_crude_gammas(const vg_series* series, double level, vg_crude_row* rows, size_t capacity, size_t* count) {
    return guarded([&] {
        require(series != nullptr, "series is null");
        copy_rows(vgrowth::crude_gammas(series->value, level), rows, capacity, count, [](const auto& m) {
            return vg_crude_row{m.t_index, m.value, m.ci_low, m.ci_high, m.corrected ? 1 : 0};
        });
    });
}

vg_status vg_proportion_intervals(const vg_series* series, double level, vg_proportion_row* rows, size_t capacity,
                                  size_t* count) {
    return guarded([&] {
        require(series != nullptr, "series is null");
        copy_rows(vgrowth::proportion_intervals(series->value, level), rows, capacity, count, [](const auto& p) {
            return vg_proportion_row{p.t_index, p.estimate, p.ci_low, p.ci_high};
        });
    });
}

vg_status vg_forecast(const vg_fit* fit, const vg_variance* variance, const double* horizons, size_t n_horizons,
                      double c, vg_forecast_row* rows) {
    return guarded([&] {
        require(fit && variance, "null argument");
        require(n_horizons == 0 || (horizons && rows), "null horizon or row buffer");
        const auto band = vgrowth::forecast(fit->value, variance->value, {horizons, n_horizons}, c);
        for (size_t i = 0; i < band.points.size(); ++i) {
            const auto& p = band.points[i];
            rows[i] = {p.t, p.point, p.lower, p.upper, p.predictor_sd};
        }
    });
}

vg_status vg_infer_variant_r(double R_all, double lambda, double gamma_gen, vg_repro* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        const auto r = vgrowth::infer_variant_R(R_all, vgrowth::Proportion(lambda), vgrowth::Advantage(gamma_gen, 1.0));
        *out = {r.R_all, r.lambda, r.gamma_gen, r.R_variant, r.R_incumbent};
    });
}

vg_status vg_adjusted_r(double cases_t, double cases_prev, double tested_t, double tested_prev, double gen_days,
                        double period_days, double exponent, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = vgrowth::adjusted_R(cases_t, cases_prev, tested_t, tested_prev, gen_days, period_days, exponent);
    });
}

vg_status vg_adjusted_r_series(const vg_series* series, double gen_days, double exponent, vg_adjusted_r_row* rows,
                               size_t capacity, size_t* count) {
    return guarded([&] {
        require(series != nullptr, "series is null");
        const auto pts = vgrowth::adjusted_R_series(series->value, gen_days, exponent);
        // Labels point into the series, which outlives the returned rows.
        copy_rows(pts, rows, capacity, count, [&](const auto& p) {
            const char* label = "";
            for (const auto& r : series->value) {
                if (r.t_index == p.t_index) label = r.label.c_str();
            }
            return vg_adjusted_r_row{p.t_index, label, p.R, p.proportion};
        });
    });
}

vg_status vg_lambda_grid(double start, double stop, double step, double* out, size_t capacity, size_t* count) {
    return guarded([&] {
        copy_rows(vgrowth::lambda_grid(start, stop, step), out, capacity, count, [](double v) { return v; });
    });
}

vg_status vg_stability_region(const vg_interval* gamma, const double* lambdas, size_t n, vg_stability_row* rows) {
    return guarded([&] {
        require(gamma != nullptr, "gamma is null");
        require(n == 0 || (lambdas && rows), "null grid or row buffer");
        const auto pts = vgrowth::stability_region(from_c(*gamma), {lambdas, n});
        for (size_t i = 0; i < pts.size(); ++i) rows[i] = {pts[i].lambda, pts[i].threshold, pts[i].lo, pts[i].hi};
    });
}

vg_status vg_multi_load_csv(const char* path, double period_days, vg_multi_series** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new vg_multi_series{vgrowth::load_multi_csv(path, period_days)};
    });
}

vg_status vg_multi_create(size_t n_periods, size_t n_variants, const int64_t* t_index, const char* const* labels,
                          const char* const* names, const int64_t* counts, double period_days,
                          vg_multi_series** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        require(n_periods == 0 || (t_index && counts), "null t_index or counts");
        std::vector<vgrowth::MultiSeries::Row> rows(n_periods);
        for (size_t i = 0; i < n_periods; ++i) {
            rows[i].t_index = t_index[i];
            rows[i].label = labels && labels[i] ? labels[i] : std::to_string(t_index[i]);
            rows[i].counts.assign(counts + i * n_variants, counts + (i + 1) * n_variants);
        }
        std::vector<std::string> variant_names;
        for (size_t j = 0; j < n_variants; ++j) {
            variant_names.push_back(names && names[j] ? names[j] : "variant_" + std::to_string(j + 1));
        }
        *out = new vg_multi_series{vgrowth::MultiSeries(std::move(rows), std::move(variant_names), period_days)};
    });
}

vg_status vg_multi_save_csv(const vg_multi_series* series, const char* path) {
    return guarded([&] {
        require(series && path, "null argument");
        std::ofstream out(path);
        if (!out) throw Error(ErrorCode::IoError, std::string("cannot write ") + path);
        vgrowth::write_multi_csv(out, series->value);
    });
}

vg_status vg_multi_to_csv(const vg_multi_series* series, char* buffer, size_t capacity, size_t* length) {
    return guarded([&] {
        require(series != nullptr, "series is null");
        std::ostringstream out;
        vgrowth::write_multi_csv(out, series->value);
        copy_text(out.str(), buffer, capacity, length);
    });
}

vg_status vg_multi_with_numeraire(const vg_multi_series* series, size_t index, vg_multi_series** out) {
    return guarded([&] {
        require(series && out, "null argument");
        *out = new vg_multi_series{vgrowth::with_numeraire(series->value, index)};
    });
}

void vg_multi_free(vg_multi_series* series) { delete series; }

size_t vg_multi_size(const vg_multi_series* series) { return series ? series->value.size() : 0; }

size_t vg_multi_variants(const vg_multi_series* series) { return series ? series->value.variants() : 0; }

const char* vg_multi_variant_name(const vg_multi_series* series, size_t index) {
    if (!series || index >= series->value.variants()) return nullptr;
    return series->value.variant_names()[index].c_str();
}

vg_status vg_multi_marginalize(const vg_multi_series* series, size_t a, size_t b, vg_series** out) {
    return guarded([&] {
        require(series && out, "null argument");
        *out = new vg_series{vgrowth::marginalize(series->value, a, b)};
    });
}

vg_status vg_step_lambda_multi(const double* lambdas, const double* gammas, size_t n_variants, double* out) {
    return guarded([&] {
        require(lambdas && gammas && out && n_variants >= 2, "invalid argument");
        const auto next = vgrowth::step_lambda_multi({lambdas, n_variants}, {gammas, n_variants - 1});
        std::copy(next.begin(), next.end(), out);
    });
}

vg_status vg_multi_fit_series(const vg_multi_series* series, const vg_fit_options* options, vg_multi_fit** out) {
    return guarded([&] {
        require(series && out, "null argument");
        *out = new vg_multi_fit{vgrowth::fit_multi(series->value, to_options(options))};
    });
}

void vg_multi_fit_free(vg_multi_fit* fit) { delete fit; }

vg_status vg_multi_fit_params(const vg_multi_fit* fit, double* alphas, double* betas, size_t capacity) {
    return guarded([&] {
        require(fit != nullptr, "fit is null");
        const auto& p = fit->value.params;
        if (capacity < p.free_variants()) {
            throw Error(ErrorCode::BufferTooSmall, "buffer too small");
        }
        for (size_t j = 0; j < p.free_variants(); ++j) {
            if (alphas) alphas[j] = p.alphas[j];
            if (betas) betas[j] = p.betas[j];
        }
    });
}

vg_status vg_multi_fit_log_likelihood(const vg_multi_fit* fit, double* out) {
    return guarded([&] {
        require(fit && out, "null argument");
        *out = fit->value.log_likelihood;
    });
}

vg_status vg_multi_fit_variance(const vg_multi_series* series, const vg_multi_fit* fit, int bandwidth,
                                vg_variance** out) {
    return guarded([&] {
        require(series && fit && out, "null argument");
        const auto kind = bandwidth < 0 ? vgrowth::VarianceKind::fisher() : vgrowth::VarianceKind::sandwich(bandwidth);
        *out = new vg_variance{vgrowth::multi_variance(series->value, fit->value, kind)};
    });
}

vg_status vg_multi_interval_gamma(const vg_multi_fit* fit, const vg_variance* variance, size_t variant,
                                  double target_days, double level, vg_interval* out) {
    return guarded([&] {
        require(fit && variance && out, "null argument");
        *out = to_c(vgrowth::interval_for_multi_gamma(variance->value, fit->value, variant, target_days, level));
    });
}

vg_status vg_simulate(const vg_sim_config* config, uint64_t replication, vg_series** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new vg_series{vgrowth::simulate(to_config(config), replication)};
    });
}

vg_status vg_simulate_multi(const vg_sim_config* config, uint64_t replication, vg_multi_series** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new vg_multi_series{vgrowth::simulate_multi(to_config(config), replication)};
    });
}

vg_status vg_expected_counts(const vg_sim_config* config, vg_multi_series** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = new vg_multi_series{vgrowth::expected_counts(to_config(config))};
    });
}

vg_status vg_recovery_report(const vg_sim_config* config, size_t n_replications, int bandwidth, double level,
                             vg_recovery* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        const auto kind = bandwidth < 0 ? vgrowth::VarianceKind::fisher() : vgrowth::VarianceKind::sandwich(bandwidth);
        const auto r = vgrowth::recovery_report(to_config(config), n_replications, kind, level);
        *out = {r.replications, r.failures, r.true_gamma, r.mean_gamma, r.relative_bias, r.coverage, r.mean_ci_width};
    });
}

}  // extern "C"
