// vgrowth command-line tool. Talks to the library only through vgrowth.h.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <utility>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vgrowth/vgrowth.h"

using nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "vgrowth-run-report/1";

// ---- handles and errors ---------------------------------------------------

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Series = std::unique_ptr<vg_series, Deleter<vg_series, vg_series_free>>;
using Fit = std::unique_ptr<vg_fit, Deleter<vg_fit, vg_fit_free>>;
using Variance = std::unique_ptr<vg_variance, Deleter<vg_variance, vg_variance_free>>;
using Multi = std::unique_ptr<vg_multi_series, Deleter<vg_multi_series, vg_multi_free>>;
using MultiFit = std::unique_ptr<vg_multi_fit, Deleter<vg_multi_fit, vg_multi_fit_free>>;

struct CliError {
    std::string code;
    std::string message;
};

void check(vg_status status) {
    if (status != VG_OK) throw CliError{vg_status_name(status), vg_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) { throw CliError{"Usage", message}; }

// ---- formatting -------------------------------------------------------------

// Values are rounded to 10 significant digits so reports are byte-stable.
ordered_json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::strtod(buf, nullptr);
}

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string days(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", d);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{"IoError", "cannot open " + path};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{"IoError", "cannot write " + path};
    out << text;
}

std::string series_csv(const vg_series* s) {
    std::size_t len = 0;
    check(vg_series_to_csv(s, nullptr, 0, &len));
    std::string text(len + 1, '\0');
    check(vg_series_to_csv(s, text.data(), text.size(), &len));
    text.resize(len);
    return text;
}

std::string multi_csv(const vg_multi_series* s) {
    std::size_t len = 0;
    check(vg_multi_to_csv(s, nullptr, 0, &len));
    std::string text(len + 1, '\0');
    check(vg_multi_to_csv(s, text.data(), text.size(), &len));
    text.resize(len);
    return text;
}

ordered_json interval_json(const vg_interval& i) {
    ordered_json j;
    j["point"] = num(i.point);
    j["low"] = num(i.low);
    j["high"] = num(i.high);
    return j;
}

std::string interval_text(const vg_interval& i, int digits = 4) {
    return fixed(i.point, digits) + "  [" + fixed(i.low, digits) + ", " + fixed(i.high, digits) + "]";
}

// ---- shared option groups ---------------------------------------------------

struct InputOptions {
    std::string dataset;
    std::string file;
    std::optional<double> period_days;
    std::optional<std::int64_t> from;
    std::optional<std::int64_t> through;
};

struct VarianceOptions {
    int hac = 4;
    bool fisher = false;
    double level = 0.95;
};

void add_input(CLI::App* cmd, InputOptions& in, bool window) {
    cmd->add_option("dataset", in.dataset, "Bundled dataset: alpha, delta or omicron");
    cmd->add_option("--file", in.file, "CSV file (t,label,sequenced,variant_count,total_cases,tested)");
    cmd->add_option("--period-days", in.period_days,
                    "Days per observation period (default: the dataset's own, 7 for files)");
    if (window) {
        cmd->add_option("--from", in.from, "First t_index to use");
        cmd->add_option("--through", in.through, "Last t_index to use");
    }
}

void add_variance(CLI::App* cmd, VarianceOptions& v) {
    auto* hac = cmd->add_option("--hac", v.hac, "HAC bandwidth K for the Parzen sandwich")->capture_default_str();
    cmd->add_flag("--fisher", v.fisher, "Use the inverse Fisher information")->excludes(hac);
    cmd->add_option("--level", v.level, "Confidence level")->capture_default_str();
}

struct Loaded {
    Series series;
    ordered_json input;
};

std::vector<vg_record> records_of(const vg_series* s) {
    std::vector<vg_record> out(vg_series_size(s));
    for (std::size_t i = 0; i < out.size(); ++i) check(vg_series_record(s, i, &out[i]));
    return out;
}

Series with_period(const vg_series* s, double period) {
    const auto recs = records_of(s);
    std::vector<std::int64_t> t, n, x, c, tested;
    std::vector<const char*> labels;
    for (const auto& r : recs) {
        t.push_back(r.t_index);
        labels.push_back(r.label);
        n.push_back(r.sequenced);
        x.push_back(r.variant_count);
        c.push_back(r.total_cases);
        tested.push_back(r.tested);
    }
    vg_series* out = nullptr;
    check(vg_series_create(recs.size(), t.data(), labels.data(), n.data(), x.data(), c.data(), tested.data(), period,
                           &out));
    return Series(out);
}

Loaded load_input(const InputOptions& in) {
    if (in.dataset.empty() == in.file.empty()) usage_error("give exactly one of a dataset name or --file");
    Loaded out;
    vg_series* raw = nullptr;
    std::string digest;
    if (!in.file.empty()) {
        check(vg_series_load_csv(in.file.c_str(), in.period_days.value_or(7.0), &raw));
        out.series.reset(raw);
        digest = hex64(fnv1a(read_file(in.file)));
        out.input["source"] = "file";
        out.input["path"] = in.file;
    } else {
        check(vg_series_load_bundled(in.dataset.c_str(), &raw));
        out.series.reset(raw);
        if (in.period_days && *in.period_days != vg_series_period_days(raw)) {
            out.series = with_period(raw, *in.period_days);
        }
        digest = hex64(fnv1a(series_csv(out.series.get())));
        out.input["source"] = "bundled";
        out.input["dataset"] = in.dataset;
    }
    out.input["digest"] = "fnv1a64:" + digest;
    out.input["records"] = vg_series_size(out.series.get());
    out.input["period_days"] = num(vg_series_period_days(out.series.get()));
    if (in.from || in.through) {
        const auto recs = records_of(out.series.get());
        const std::int64_t lo = in.from.value_or(recs.front().t_index);
        const std::int64_t hi = in.through.value_or(recs.back().t_index);
        vg_series* w = nullptr;
        check(vg_series_slice(out.series.get(), lo, hi, &w));
        out.series.reset(w);
        out.input["window"] = {{"from", lo}, {"through", hi}, {"records", vg_series_size(w)}};
    }
    return out;
}

std::string input_name(const ordered_json& input) {
    return input["source"] == "file" ? input["path"].get<std::string>() : input["dataset"].get<std::string>();
}

Fit fit_series(const vg_series* s) {
    vg_fit_options opt;
    vg_fit_options_default(&opt);
    vg_fit* f = nullptr;
    check(vg_fit_series(s, &opt, &f));
    return Fit(f);
}

Variance variance_for(const vg_series* s, const vg_fit* f, const VarianceOptions& v, int bandwidth) {
    vg_variance* out = nullptr;
    check(v.fisher ? vg_variance_fisher(s, f, &out) : vg_variance_hac(s, f, bandwidth, &out));
    return Variance(out);
}

ordered_json variance_json(const VarianceOptions& v, int bandwidth_used) {
    ordered_json j;
    j["estimator"] = v.fisher ? "fisher" : "hac-parzen";
    if (!v.fisher) {
        j["bandwidth"] = v.hac;
        if (bandwidth_used != v.hac) j["bandwidth_used"] = bandwidth_used;
    }
    j["level"] = num(v.level);
    return j;
}

std::string variance_text(const VarianceOptions& v, int bandwidth_used) {
    std::string s = v.fisher ? "inverse Fisher information" : "HAC sandwich, Parzen kernel, K = " + std::to_string(bandwidth_used);
    return s + ", level " + days(v.level);
}

ordered_json report(const std::string& command, ordered_json options, ordered_json input, ordered_json results) {
    ordered_json r;
    r["schema"] = kSchema;
    r["tool"] = {{"name", "vgrowth"}, {"version", vg_version()}};
    r["command"] = command;
    r["options"] = std::move(options);
    if (!input.is_null()) r["input"] = std::move(input);
    r["results"] = std::move(results);
    return r;
}

void emit_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

// ---- estimate -----------------------------------------------------------------

struct EstimateOptions {
    InputOptions input;
    VarianceOptions variance;
    double gen_days = 4.7;
    bool json = false;
    bool csv = false;
};

int run_estimate(const EstimateOptions& o) {
    auto in = load_input(o.input);
    const auto* s = in.series.get();
    const auto f = fit_series(s);
    const auto v = variance_for(s, f.get(), o.variance, o.variance.hac);
    vg_fit_summary sum;
    check(vg_fit_get_summary(f.get(), &sum));
    vg_interval alpha, beta, per_period, per_gen, per_week;
    check(vg_interval_parameter(f.get(), v.get(), 0, o.variance.level, &alpha));
    check(vg_interval_parameter(f.get(), v.get(), 1, o.variance.level, &beta));
    check(vg_interval_gamma(f.get(), v.get(), sum.period_days, o.variance.level, &per_period));
    check(vg_interval_gamma(f.get(), v.get(), o.gen_days, o.variance.level, &per_gen));
    check(vg_interval_gamma(f.get(), v.get(), 7.0, o.variance.level, &per_week));
    double m[4];
    check(vg_variance_matrix(v.get(), m, 4));

    if (o.csv) {
        std::printf("quantity,period_days,point,low,high,std_error\n");
        std::printf("alpha,,%.10g,%.10g,%.10g,%.10g\n", alpha.point, alpha.low, alpha.high, alpha.std_error);
        std::printf("beta,,%.10g,%.10g,%.10g,%.10g\n", beta.point, beta.low, beta.high, beta.std_error);
        const std::pair<const char*, const vg_interval*> gammas[] = {
            {"gamma_period", &per_period}, {"gamma_generation", &per_gen}, {"gamma_week", &per_week}};
        for (const auto& [name, g] : gammas) {
            std::printf("%s,%.10g,%.10g,%.10g,%.10g,\n", name, g->period_days, g->point, g->low, g->high);
        }
        return 0;
    }
    if (o.json) {
        ordered_json opts;
        opts["period_days"] = num(sum.period_days);
        opts["gen_days"] = num(o.gen_days);
        opts["variance"] = variance_json(o.variance, o.variance.hac);
        ordered_json res;
        res["fit"] = {{"alpha", num(sum.alpha)},
                      {"beta", num(sum.beta)},
                      {"log_likelihood", num(sum.log_likelihood)},
                      {"iterations", sum.iterations},
                      {"converged", sum.converged != 0},
                      {"records", vg_series_size(s)}};
        res["variance_matrix"] = {{num(m[0]), num(m[1])}, {num(m[2]), num(m[3])}};
        auto a = interval_json(alpha);
        a["std_error"] = num(alpha.std_error);
        auto b = interval_json(beta);
        b["std_error"] = num(beta.std_error);
        res["parameters"] = {{"alpha", a}, {"beta", b}};
        auto gp = interval_json(per_period), gg = interval_json(per_gen), gw = interval_json(per_week);
        gp["period_days"] = num(per_period.period_days);
        gg["period_days"] = num(per_gen.period_days);
        gw["period_days"] = num(per_week.period_days);
        res["gamma"] = {{"period", gp}, {"generation", gg}, {"week", gw}};
        emit_json(report("estimate", opts, in.input, res));
        return 0;
    }
    std::printf("estimate: %s, %zu records, %s-day periods\n", input_name(in.input).c_str(), vg_series_size(s),
                days(sum.period_days).c_str());
    std::printf("variance: %s\n\n", variance_text(o.variance, o.variance.hac).c_str());
    std::printf("  %-16s %s   se %s\n", "alpha", interval_text(alpha).c_str(), fixed(alpha.std_error, 5).c_str());
    std::printf("  %-16s %s   se %s\n", "beta", interval_text(beta, 5).c_str(), fixed(beta.std_error, 5).c_str());
    std::printf("  %-16s %s\n", ("gamma/" + days(per_period.period_days) + "d").c_str(), interval_text(per_period).c_str());
    std::printf("  %-16s %s\n", ("gamma/" + days(o.gen_days) + "d").c_str(), interval_text(per_gen).c_str());
    std::printf("  %-16s %s\n", "gamma/week", interval_text(per_week).c_str());
    std::printf("\nlog-likelihood %.6f, %d Newton iterations\n", sum.log_likelihood, sum.iterations);
    return 0;
}

// ---- forecast -----------------------------------------------------------------

struct ForecastOptions {
    InputOptions input;
    VarianceOptions variance;
    std::optional<std::int64_t> train_from;
    std::optional<std::int64_t> train_through;
    int horizons = 10;
    std::vector<double> c{2.0, 4.0};
    bool json = false;
};

int run_forecast(ForecastOptions o) {
    o.input.from = o.train_from;
    o.input.through = o.train_through;
    InputOptions full_opts = o.input;
    full_opts.from.reset();
    full_opts.through.reset();
    const auto full = load_input(full_opts);
    auto in = load_input(o.input);
    if (o.horizons < 0) usage_error("--horizons must be non-negative");
    const auto* s = in.series.get();
    const auto f = fit_series(s);
    // Short windows cannot carry K lags; use the longest available.
    const int k_used = std::min<int>(o.variance.hac, static_cast<int>(vg_series_size(s)) - 1);
    const auto v = variance_for(s, f.get(), o.variance, k_used);
    vg_fit_summary sum;
    check(vg_fit_get_summary(f.get(), &sum));
    vg_interval gamma;
    check(vg_interval_gamma(f.get(), v.get(), sum.period_days, o.variance.level, &gamma));

    const auto train = records_of(s);
    const std::int64_t last = train.back().t_index;
    std::vector<double> ts;
    for (int h = 1; h <= o.horizons; ++h) ts.push_back(static_cast<double>(last + h));
    const auto all = records_of(full.series.get());
    auto observed = [&](double t) -> std::optional<double> {
        for (const auto& r : all) {
            if (static_cast<double>(r.t_index) == t && r.sequenced > 0) {
                return static_cast<double>(r.variant_count) / static_cast<double>(r.sequenced);
            }
        }
        return std::nullopt;
    };

    struct Band {
        double c;
        std::vector<vg_forecast_row> rows;
    };
    std::vector<Band> bands;
    for (double c : o.c) {
        Band b{c, std::vector<vg_forecast_row>(ts.size())};
        check(vg_forecast(f.get(), v.get(), ts.data(), ts.size(), c, b.rows.data()));
        bands.push_back(std::move(b));
    }

    if (o.json) {
        ordered_json opts;
        opts["train_from"] = train.front().t_index;
        opts["train_through"] = last;
        opts["horizons"] = o.horizons;
        opts["c"] = ordered_json::array();
        for (double c : o.c) opts["c"].push_back(num(c));
        opts["variance"] = variance_json(o.variance, k_used);
        ordered_json res;
        res["fit"] = {{"alpha", num(sum.alpha)}, {"beta", num(sum.beta)}, {"records", train.size()}};
        auto g = interval_json(gamma);
        g["period_days"] = num(gamma.period_days);
        res["gamma"] = g;
        res["bands"] = ordered_json::array();
        for (const auto& b : bands) {
            ordered_json jb;
            jb["c"] = num(b.c);
            jb["rows"] = ordered_json::array();
            for (std::size_t i = 0; i < b.rows.size(); ++i) {
                const auto& r = b.rows[i];
                ordered_json row{{"t", num(r.t)},        {"horizon", i + 1},       {"point", num(r.point)},
                                 {"lower", num(r.lower)}, {"upper", num(r.upper)}, {"predictor_sd", num(r.predictor_sd)}};
                const auto obs = observed(r.t);
                row["observed"] = obs ? num(*obs) : ordered_json(nullptr);
                jb["rows"].push_back(row);
            }
            res["bands"].push_back(jb);
        }
        emit_json(report("forecast", opts, in.input, res));
        return 0;
    }
    std::printf("forecast: %s, trained on t %lld..%lld (%zu records)\n", input_name(in.input).c_str(),
                static_cast<long long>(train.front().t_index), static_cast<long long>(last), train.size());
    std::printf("variance: %s\n", variance_text(o.variance, k_used).c_str());
    std::printf("in-sample gamma/%sd %s\n", days(sum.period_days).c_str(), interval_text(gamma).c_str());
    for (const auto& b : bands) {
        std::printf("\nc = %g\n  %6s %8s %8s %8s %8s\n", b.c, "t", "lower", "point", "upper", "observed");
        for (const auto& r : b.rows) {
            const auto obs = observed(r.t);
            std::printf("  %6g %8.4f %8.4f %8.4f %8s\n", r.t, r.lower, r.point, r.upper,
                        obs ? fixed(*obs).c_str() : "-");
        }
    }
    return 0;
}

// ---- infer-r ------------------------------------------------------------------

struct InferOptions {
    std::optional<double> R;
    std::optional<double> lambda;
    std::optional<double> gamma_gen;
    std::optional<double> gamma_low;
    std::optional<double> gamma_high;
    std::string from_fit;
    std::string contour;
    std::string contour_out;
    double gen_days = 4.7;
    bool json = false;
};

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || *end != '\0') usage_error("--contour expects start:stop:step, got '" + spec + "'");
        parts.push_back(v);
    }
    if (parts.size() != 3) usage_error("--contour expects start:stop:step, got '" + spec + "'");
    std::size_t count = 0;
    check(vg_lambda_grid(parts[0], parts[1], parts[2], nullptr, 0, &count));
    std::vector<double> grid(count);
    check(vg_lambda_grid(parts[0], parts[1], parts[2], grid.data(), grid.size(), &count));
    return grid;
}

int run_infer_r(const InferOptions& o) {
    vg_interval gamma{0, 0, 0, 0.95, o.gen_days, 0};
    bool have_gamma = false;
    if (!o.from_fit.empty()) {
        ordered_json rep;
        try {
            rep = ordered_json::parse(read_file(o.from_fit));
            const auto& g = rep.at("results").at("gamma").at("generation");
            gamma = {g.at("point").get<double>(), g.at("low").get<double>(), g.at("high").get<double>(),
                     rep.at("options").at("variance").at("level").get<double>(), g.at("period_days").get<double>(), 0};
        } catch (const ordered_json::exception& e) {
            throw CliError{"ParseError", o.from_fit + " is not an estimate report: " + e.what()};
        }
        have_gamma = true;
    }
    if (o.gamma_gen) {
        gamma.point = *o.gamma_gen;
        gamma.low = o.gamma_low.value_or(*o.gamma_gen);
        gamma.high = o.gamma_high.value_or(*o.gamma_gen);
        gamma.period_days = o.gen_days;
        have_gamma = true;
    }
    if (!have_gamma) usage_error("give --gamma-gen or --from-fit");
    if (o.R.has_value() != o.lambda.has_value()) usage_error("--R and --lambda go together");
    if (!o.R && o.contour.empty()) usage_error("nothing to do: give --R and --lambda, or --contour");

    std::optional<vg_repro> repro;
    if (o.R) {
        vg_repro r;
        check(vg_infer_variant_r(*o.R, *o.lambda, gamma.point, &r));
        repro = r;
    }
    std::vector<vg_stability_row> rows;
    if (!o.contour.empty()) {
        const auto grid = parse_grid(o.contour);
        rows.resize(grid.size());
        check(vg_stability_region(&gamma, grid.data(), grid.size(), rows.data()));
    }
    std::string csv;
    if (!o.contour.empty()) {
        csv = "lambda,threshold,lo,hi\n";
        char buf[128];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", r.lambda, r.threshold, r.lo, r.hi);
            csv += buf;
        }
        if (!o.contour_out.empty()) write_text(o.contour_out, csv);
    }

    if (o.json) {
        ordered_json opts;
        if (o.R) opts["R"] = num(*o.R);
        if (o.lambda) opts["lambda"] = num(*o.lambda);
        auto g = interval_json(gamma);
        g["period_days"] = num(gamma.period_days);
        opts["gamma_gen"] = g;
        if (!o.from_fit.empty()) opts["from_fit"] = o.from_fit;
        if (!o.contour.empty()) opts["contour"] = o.contour;
        ordered_json res = ordered_json::object();
        if (repro) {
            res["R_variant"] = num(repro->R_variant);
            res["R_incumbent"] = num(repro->R_incumbent);
        }
        if (!o.contour.empty()) {
            res["contour"] = ordered_json::array();
            for (const auto& r : rows) {
                res["contour"].push_back(
                    {{"lambda", num(r.lambda)}, {"threshold", num(r.threshold)}, {"lo", num(r.lo)}, {"hi", num(r.hi)}});
            }
        }
        emit_json(report("infer-r", opts, nullptr, res));
        return 0;
    }
    if (repro) {
        std::printf("R_variant   %.10g\nR_incumbent %.10g\n", repro->R_variant, repro->R_incumbent);
    }
    if (!o.contour.empty()) {
        if (o.contour_out.empty()) {
            std::fputs(csv.c_str(), stdout);
        } else {
            std::printf("wrote %zu contour rows to %s\n", rows.size(), o.contour_out.c_str());
        }
    }
    return 0;
}

// ---- crude ----------------------------------------------------------------------

struct CrudeOptions {
    InputOptions input;
    double level = 0.95;
    bool json = false;
};

int run_crude(const CrudeOptions& o) {
    auto in = load_input(o.input);
    const auto* s = in.series.get();
    std::size_t count = 0;
    check(vg_crude_gammas(s, o.level, nullptr, 0, &count));
    std::vector<vg_crude_row> rows(count);
    check(vg_crude_gammas(s, o.level, rows.data(), rows.size(), &count));
    check(vg_proportion_intervals(s, o.level, nullptr, 0, &count));
    std::vector<vg_proportion_row> props(count);
    check(vg_proportion_intervals(s, o.level, props.data(), props.size(), &count));
    double mean = 0;
    for (const auto& r : rows) mean += r.value;
    mean = rows.empty() ? NAN : mean / static_cast<double>(rows.size());

    if (o.json) {
        ordered_json res;
        res["mean"] = num(mean);
        res["measures"] = ordered_json::array();
        for (const auto& r : rows) {
            res["measures"].push_back({{"t", r.t_index},
                                       {"value", num(r.value)},
                                       {"low", num(r.low)},
                                       {"high", num(r.high)},
                                       {"corrected", r.corrected != 0}});
        }
        res["proportions"] = ordered_json::array();
        for (const auto& p : props) {
            res["proportions"].push_back(
                {{"t", p.t_index}, {"estimate", num(p.estimate)}, {"low", num(p.low)}, {"high", num(p.high)}});
        }
        emit_json(report("crude", {{"level", num(o.level)}}, in.input, res));
        return 0;
    }
    std::printf("crude: %s, %zu adjacent pairs, level %g\n\n", input_name(in.input).c_str(), rows.size(), o.level);
    std::printf("  %6s %9s %9s %9s\n", "t", "gamma", "low", "high");
    for (const auto& r : rows) {
        std::printf("  %6lld %9.4f %9.4f %9.4f%s\n", static_cast<long long>(r.t_index), r.value, r.low, r.high,
                    r.corrected ? "  (+0.5)" : "");
    }
    std::printf("\nmean crude gamma %.4f\n", mean);
    return 0;
}

// ---- rt ---------------------------------------------------------------------------

struct RtOptions {
    InputOptions input;
    double gen_days = 4.7;
    double exponent = 0.7;
    bool threshold = false;
    VarianceOptions variance;
    bool json = false;
};

int run_rt(const RtOptions& o) {
    auto in = load_input(o.input);
    const auto* s = in.series.get();
    std::size_t count = 0;
    check(vg_adjusted_r_series(s, o.gen_days, o.exponent, nullptr, 0, &count));
    std::vector<vg_adjusted_r_row> rows(count);
    check(vg_adjusted_r_series(s, o.gen_days, o.exponent, rows.data(), rows.size(), &count));

    // Optional R_B = 1 threshold at each observed proportion, from a fit of the same series.
    std::vector<vg_stability_row> thr;
    if (o.threshold && !rows.empty()) {
        const auto f = fit_series(s);
        const auto v = variance_for(s, f.get(), o.variance, o.variance.hac);
        vg_interval g;
        check(vg_interval_gamma(f.get(), v.get(), o.gen_days, o.variance.level, &g));
        std::vector<double> lam;
        for (const auto& r : rows) lam.push_back(r.proportion);
        thr.resize(rows.size());
        check(vg_stability_region(&g, lam.data(), lam.size(), thr.data()));
    }

    if (o.json) {
        ordered_json opts{{"gen_days", num(o.gen_days)}, {"exponent", num(o.exponent)}};
        if (o.threshold) opts["variance"] = variance_json(o.variance, o.variance.hac);
        ordered_json res;
        res["rows"] = ordered_json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            ordered_json row{{"t", rows[i].t_index},
                             {"label", rows[i].label},
                             {"R", num(rows[i].R)},
                             {"proportion", num(rows[i].proportion)}};
            if (!thr.empty()) {
                row["threshold"] = num(thr[i].threshold);
                row["variant_growing"] = rows[i].R > thr[i].threshold;
            }
            res["rows"].push_back(row);
        }
        emit_json(report("rt", opts, in.input, res));
        return 0;
    }
    std::printf("rt: %s, test-adjusted R per %s-day generation (exponent %g)\n\n", input_name(in.input).c_str(),
                days(o.gen_days).c_str(), o.exponent);
    std::printf("  %6s %-12s %8s %10s%s\n", "t", "label", "R", "proportion", thr.empty() ? "" : "  threshold");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::printf("  %6lld %-12s %8.4f %10.4f", static_cast<long long>(rows[i].t_index), rows[i].label, rows[i].R,
                    rows[i].proportion);
        if (!thr.empty()) std::printf("  %9.4f", thr[i].threshold);
        std::printf("\n");
    }
    if (rows.empty()) std::printf("  (no adjacent records carry both total_cases and tested)\n");
    return 0;
}

// ---- simulate ---------------------------------------------------------------------

struct SimulateOptions {
    std::vector<double> gamma;
    std::vector<double> lambda0;
    std::int64_t n = 3000;
    std::size_t t = 18;
    std::uint64_t seed = 1;
    std::uint64_t replication = 0;
    std::size_t replications = 0;
    std::vector<double> growth;
    double initial_cases = 1000.0;
    double period_days = 7.0;
    VarianceOptions variance;
    std::string out;
    bool json = false;
};

int run_simulate(const SimulateOptions& o) {
    const std::size_t m = o.gamma.size() + 1;
    if (o.lambda0.size() != m - 1) {
        usage_error("--lambda0 needs one initial share per --gamma (" + std::to_string(m - 1) + ")");
    }
    std::vector<double> initial{1.0};
    for (double l : o.lambda0) {
        initial.push_back(l);
        initial[0] -= l;
    }
    std::vector<std::int64_t> sequenced(o.t, o.n);
    std::vector<double> growth = o.growth;
    if (growth.size() == 1) growth.assign(o.t, growth[0]);
    vg_sim_config cfg{m,      o.gamma.data(), initial.data(), o.t, sequenced.data(), o.seed,
                      growth.empty() ? nullptr : growth.data(), o.initial_cases, o.period_days};

    ordered_json opts;
    opts["gamma"] = ordered_json::array();
    for (double g : o.gamma) opts["gamma"].push_back(num(g));
    opts["lambda0"] = ordered_json::array();
    for (double l : o.lambda0) opts["lambda0"].push_back(num(l));
    opts["n"] = o.n;
    opts["t"] = o.t;
    opts["seed"] = o.seed;
    opts["period_days"] = num(o.period_days);
    if (!growth.empty()) {
        opts["growth"] = ordered_json::array();
        for (double g : growth) opts["growth"].push_back(num(g));
        opts["initial_cases"] = num(o.initial_cases);
    }

    if (o.replications > 0) {
        if (m != 2) usage_error("--replications needs a single --gamma");
        vg_recovery rec;
        check(vg_recovery_report(&cfg, o.replications, o.variance.fisher ? -1 : o.variance.hac, o.variance.level, &rec));
        if (o.json) {
            opts["replications"] = o.replications;
            opts["variance"] = variance_json(o.variance, o.variance.hac);
            ordered_json res{{"replications", rec.replications},   {"failures", rec.failures},
                             {"true_gamma", num(rec.true_gamma)},   {"mean_gamma", num(rec.mean_gamma)},
                             {"relative_bias", num(rec.relative_bias)}, {"coverage", num(rec.coverage)},
                             {"mean_ci_width", num(rec.mean_ci_width)}};
            emit_json(report("simulate", opts, nullptr, res));
            return 0;
        }
        std::printf("recovery over %zu replications (%zu failed fits), %s\n", rec.replications, rec.failures,
                    variance_text(o.variance, o.variance.hac).c_str());
        std::printf("  true gamma     %.4f\n  mean estimate  %.4f\n  relative bias  %+.4f%%\n", rec.true_gamma,
                    rec.mean_gamma, 100 * rec.relative_bias);
        std::printf("  coverage       %.1f%%\n  mean CI width  %.4f\n", 100 * rec.coverage, rec.mean_ci_width);
        return 0;
    }

    std::string csv;
    if (m == 2) {
        vg_series* s = nullptr;
        check(vg_simulate(&cfg, o.replication, &s));
        csv = series_csv(Series(s).get());
    } else {
        vg_multi_series* s = nullptr;
        check(vg_simulate_multi(&cfg, o.replication, &s));
        csv = multi_csv(Multi(s).get());
    }
    if (!o.out.empty()) write_text(o.out, csv);
    if (o.json) {
        opts["replication"] = o.replication;
        if (!o.out.empty()) opts["out"] = o.out;
        ordered_json res{{"digest", "fnv1a64:" + hex64(fnv1a(csv))}, {"csv", csv}};
        emit_json(report("simulate", opts, nullptr, res));
    } else if (o.out.empty()) {
        std::fputs(csv.c_str(), stdout);
    } else {
        std::printf("wrote %zu periods, %zu variants to %s\n", o.t, m, o.out.c_str());
    }
    return 0;
}

// ---- multi --------------------------------------------------------------------------

struct MultiOptions {
    std::string file;
    double period_days = 7.0;
    double gen_days = 4.7;
    std::optional<std::size_t> numeraire;
    VarianceOptions variance;
    bool json = false;
};

int run_multi(const MultiOptions& o) {
    vg_multi_series* raw = nullptr;
    check(vg_multi_load_csv(o.file.c_str(), o.period_days, &raw));
    Multi ms(raw);
    if (o.numeraire) {
        vg_multi_series* r = nullptr;
        check(vg_multi_with_numeraire(ms.get(), *o.numeraire, &r));
        ms.reset(r);
    }
    vg_fit_options opt;
    vg_fit_options_default(&opt);
    vg_multi_fit* rf = nullptr;
    check(vg_multi_fit_series(ms.get(), &opt, &rf));
    MultiFit f(rf);
    vg_variance* rv = nullptr;
    check(vg_multi_fit_variance(ms.get(), f.get(), o.variance.fisher ? -1 : o.variance.hac, &rv));
    Variance v(rv);
    const std::size_t m = vg_multi_variants(ms.get());
    std::vector<double> alphas(m - 1), betas(m - 1);
    check(vg_multi_fit_params(f.get(), alphas.data(), betas.data(), m - 1));
    double ll = 0;
    check(vg_multi_fit_log_likelihood(f.get(), &ll));

    struct Row {
        std::string name;
        vg_interval period, gen;
    };
    std::vector<Row> rows;
    for (std::size_t j = 1; j < m; ++j) {
        Row r{vg_multi_variant_name(ms.get(), j), {}, {}};
        check(vg_multi_interval_gamma(f.get(), v.get(), j, o.period_days, o.variance.level, &r.period));
        check(vg_multi_interval_gamma(f.get(), v.get(), j, o.gen_days, o.variance.level, &r.gen));
        rows.push_back(r);
    }

    const std::string numeraire = vg_multi_variant_name(ms.get(), 0);
    if (o.json) {
        ordered_json input{{"source", "file"},
                           {"path", o.file},
                           {"digest", "fnv1a64:" + hex64(fnv1a(read_file(o.file)))},
                           {"records", vg_multi_size(ms.get())},
                           {"variants", m},
                           {"period_days", num(o.period_days)}};
        ordered_json opts{{"gen_days", num(o.gen_days)}, {"variance", variance_json(o.variance, o.variance.hac)}};
        if (o.numeraire) opts["numeraire"] = *o.numeraire;
        ordered_json res;
        res["numeraire"] = numeraire;
        res["log_likelihood"] = num(ll);
        res["variants"] = ordered_json::array();
        for (std::size_t j = 0; j < rows.size(); ++j) {
            res["variants"].push_back({{"name", rows[j].name},
                                       {"alpha", num(alphas[j])},
                                       {"beta", num(betas[j])},
                                       {"gamma_period", interval_json(rows[j].period)},
                                       {"gamma_generation", interval_json(rows[j].gen)}});
        }
        emit_json(report("multi", opts, input, res));
        return 0;
    }
    std::printf("multi: %s, %zu periods, %zu variants, advantages over %s\n", o.file.c_str(),
                vg_multi_size(ms.get()), m, numeraire.c_str());
    std::printf("variance: %s\n\n", variance_text(o.variance, o.variance.hac).c_str());
    std::printf("  %-16s %-28s %s\n", "variant", ("gamma/" + days(o.period_days) + "d").c_str(),
                ("gamma/" + days(o.gen_days) + "d").c_str());
    for (const auto& r : rows) {
        std::printf("  %-16s %-28s %s\n", r.name.c_str(), interval_text(r.period).c_str(), interval_text(r.gen).c_str());
    }
    std::printf("\nlog-likelihood %.6f\n", ll);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimate the growth advantage of an emerging variant from sequenced case counts"};
    app.set_version_flag("--version", std::string(vg_version()));
    app.require_subcommand(1);

    EstimateOptions est;
    auto* c_est = app.add_subcommand("estimate", "Fit the logistic model and report gamma with intervals");
    add_input(c_est, est.input, true);
    add_variance(c_est, est.variance);
    c_est->add_option("--gen-days", est.gen_days, "Generation time in days")->capture_default_str();
    auto* est_json = c_est->add_flag("--json", est.json, "Emit a JSON run report");
    c_est->add_flag("--csv", est.csv, "Emit the intervals as CSV")->excludes(est_json);

    ForecastOptions fc;
    auto* c_fc = app.add_subcommand("forecast", "Project the variant share with delta-method bands");
    add_input(c_fc, fc.input, false);
    add_variance(c_fc, fc.variance);
    c_fc->add_option("--train-from", fc.train_from, "First t_index of the training window");
    c_fc->add_option("--train-through", fc.train_through, "Last t_index of the training window");
    c_fc->add_option("--horizons", fc.horizons, "Number of periods ahead")->capture_default_str();
    c_fc->add_option("--c", fc.c, "Band half-widths in predictor standard deviations")
        ->delimiter(',')
        ->capture_default_str();
    c_fc->add_flag("--json", fc.json, "Emit a JSON run report");

    InferOptions ir;
    auto* c_ir = app.add_subcommand("infer-r", "Reproduction number of the emerging variant and stability region");
    c_ir->add_option("--R", ir.R, "Aggregate reproduction number per generation");
    c_ir->add_option("--lambda", ir.lambda, "Variant share");
    c_ir->add_option("--gamma-gen", ir.gamma_gen, "Advantage per generation");
    c_ir->add_option("--gamma-low", ir.gamma_low, "Lower interval endpoint for the advantage");
    c_ir->add_option("--gamma-high", ir.gamma_high, "Upper interval endpoint for the advantage");
    c_ir->add_option("--from-fit", ir.from_fit, "Take gamma per generation from an `estimate --json` report");
    c_ir->add_option("--gen-days", ir.gen_days, "Generation time in days")->capture_default_str();
    c_ir->add_option("--contour", ir.contour, "Stability-region grid start:stop:step over lambda");
    c_ir->add_option("--contour-out", ir.contour_out, "Write the contour CSV here instead of stdout");
    c_ir->add_flag("--json", ir.json, "Emit a JSON run report");

    CrudeOptions cr;
    auto* c_cr = app.add_subcommand("crude", "Model-free adjacent-period odds ratios");
    add_input(c_cr, cr.input, true);
    c_cr->add_option("--level", cr.level, "Confidence level")->capture_default_str();
    c_cr->add_flag("--json", cr.json, "Emit a JSON run report");

    RtOptions rt;
    auto* c_rt = app.add_subcommand("rt", "Test-adjusted aggregate reproduction numbers");
    add_input(c_rt, rt.input, true);
    c_rt->add_option("--gen-days", rt.gen_days, "Generation time in days")->capture_default_str();
    c_rt->add_option("--exponent", rt.exponent, "Testing-intensity exponent")->capture_default_str();
    c_rt->add_flag("--threshold", rt.threshold, "Add the R_variant = 1 threshold from a fit of the same data");
    add_variance(c_rt, rt.variance);
    c_rt->add_flag("--json", rt.json, "Emit a JSON run report");

    SimulateOptions sim;
    auto* c_sim = app.add_subcommand("simulate", "Draw synthetic surveillance counts");
    c_sim->add_option("--gamma", sim.gamma, "Per-period advantage of each non-incumbent variant")
        ->required()
        ->delimiter(',');
    c_sim->add_option("--lambda0", sim.lambda0, "Initial share of each non-incumbent variant")
        ->required()
        ->delimiter(',');
    c_sim->add_option("--n", sim.n, "Sequenced cases per period")->capture_default_str();
    c_sim->add_option("--t", sim.t, "Number of periods")->capture_default_str();
    c_sim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    c_sim->add_option("--replication", sim.replication, "Replication stream to draw")->capture_default_str();
    c_sim->add_option("--replications", sim.replications, "Refit this many replications and report recovery");
    c_sim->add_option("--growth", sim.growth, "Incumbent case growth per period (one value or one per period)")
        ->delimiter(',');
    c_sim->add_option("--initial-cases", sim.initial_cases, "Total cases at t = 0 with --growth")
        ->capture_default_str();
    c_sim->add_option("--period-days", sim.period_days, "Days per period")->capture_default_str();
    add_variance(c_sim, sim.variance);
    c_sim->add_option("--out", sim.out, "Write the CSV here instead of stdout");
    c_sim->add_flag("--json", sim.json, "Emit a JSON run report");

    MultiOptions mu;
    auto* c_mu = app.add_subcommand("multi", "Fit the multinomial model to several competing variants");
    c_mu->add_option("--file", mu.file, "CSV file (t,label,<variant>,...)")->required();
    c_mu->add_option("--period-days", mu.period_days, "Days per observation period")->capture_default_str();
    c_mu->add_option("--gen-days", mu.gen_days, "Generation time in days")->capture_default_str();
    c_mu->add_option("--numeraire", mu.numeraire, "0-based column to use as the reference variant");
    add_variance(c_mu, mu.variance);
    c_mu->add_flag("--json", mu.json, "Emit a JSON run report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error[Usage]: %s\n", e.what());
        return 1;
    }

    try {
        if (c_est->parsed()) return run_estimate(est);
        if (c_fc->parsed()) return run_forecast(fc);
        if (c_ir->parsed()) return run_infer_r(ir);
        if (c_cr->parsed()) return run_crude(cr);
        if (c_rt->parsed()) return run_rt(rt);
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_mu->parsed()) return run_multi(mu);
    } catch (const CliError& e) {
        std::string msg = e.message;
        for (auto& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        std::fprintf(stderr, "error[%s]: %s\n", e.code.c_str(), msg.c_str());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error[Internal]: %s\n", e.what());
        return 1;
    }
    return 1;
}
