/* Exercises the shared library through the C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "vgrowth/vgrowth.h"

static int failures = 0;

#define EXPECT(cond)                                                      \
    do {                                                                  \
        if (!(cond)) {                                                    \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                   \
        }                                                                 \
    } while (0)

#define NEAR(a, b, tol) EXPECT(fabs((a) - (b)) <= (tol))

static void test_status_and_errors(void) {
    vg_series* s = NULL;
    EXPECT(vg_series_load_bundled("beta", &s) == VG_ERR_UNKNOWN_DATASET);
    EXPECT(s == NULL);
    EXPECT(strlen(vg_last_error()) > 0);
    EXPECT(strcmp(vg_status_name(VG_ERR_SEPARATION), "Separation") == 0);
    EXPECT(strlen(vg_version()) > 0);
    EXPECT(vg_series_load_bundled(NULL, &s) == VG_ERR_INVALID_ARGUMENT);
    EXPECT(vg_series_load_csv("/nonexistent.csv", 7.0, &s) == VG_ERR_IO);

    const int64_t t[] = {1, 2};
    const int64_t n[] = {10, 10};
    const int64_t bad_x[] = {11, 1};
    EXPECT(vg_series_create(2, t, NULL, n, bad_x, NULL, NULL, 7.0, &s) == VG_ERR_COUNT_VIOLATION);
    const int64_t zero_x[] = {0, 0};
    EXPECT(vg_series_create(2, t, NULL, n, zero_x, NULL, NULL, 7.0, &s) == VG_OK);
    vg_fit* f = NULL;
    EXPECT(vg_fit_series(s, NULL, &f) == VG_ERR_SEPARATION);
    EXPECT(f == NULL);
    vg_series_free(s);
}

static void test_alpha_pipeline(void) {
    vg_series* s = NULL;
    EXPECT(vg_series_load_bundled("alpha", &s) == VG_OK);
    EXPECT(vg_series_size(s) == 18);
    EXPECT(vg_series_period_days(s) == 7.0);
    vg_record rec;
    EXPECT(vg_series_record(s, 0, &rec) == VG_OK);
    EXPECT(rec.sequenced == 1486 && rec.variant_count == 4);
    EXPECT(strcmp(rec.label, "2020-W46") == 0);
    EXPECT(vg_series_record(s, 18, &rec) == VG_ERR_INVALID_INDEX);

    vg_fit_options opt;
    vg_fit_options_default(&opt);
    EXPECT(opt.tolerance > 0 && opt.max_iterations > 0 && !opt.has_initial);
    vg_fit* f = NULL;
    EXPECT(vg_fit_series(s, &opt, &f) == VG_OK);
    vg_fit_summary sum;
    EXPECT(vg_fit_get_summary(f, &sum) == VG_OK);
    NEAR(sum.beta, 0.61862, 1e-4);
    EXPECT(sum.converged);

    double g[2], h[4], ll;
    EXPECT(vg_score(s, sum.alpha, sum.beta, g) == VG_OK);
    EXPECT(fabs(g[0]) < 1e-6 && fabs(g[1]) < 1e-6);
    EXPECT(vg_hessian(s, sum.alpha, sum.beta, h) == VG_OK);
    EXPECT(h[0] < 0 && h[1] == h[2]);
    EXPECT(vg_log_likelihood(s, sum.alpha, sum.beta, &ll) == VG_OK);
    NEAR(ll, sum.log_likelihood, 1e-9);

    size_t count = 0;
    int64_t ts[4];
    double lam[4];
    EXPECT(vg_fit_fitted(f, NULL, NULL, 0, &count) == VG_OK);
    EXPECT(count == 18);
    EXPECT(vg_fit_fitted(f, ts, lam, 4, &count) == VG_ERR_BUFFER_TOO_SMALL);

    vg_variance* v = NULL;
    EXPECT(vg_variance_hac(s, f, 4, &v) == VG_OK);
    EXPECT(vg_variance_bandwidth(v) == 4);
    EXPECT(vg_variance_dim(v) == 2);
    double m[4];
    EXPECT(vg_variance_matrix(v, m, 4) == VG_OK);
    NEAR(m[1], m[2], 0.0);
    vg_interval gi;
    EXPECT(vg_interval_gamma(f, v, 4.7, 0.95, &gi) == VG_OK);
    NEAR(gi.low, 1.4971, 2e-4);
    NEAR(gi.high, 1.5329, 2e-4);
    EXPECT(gi.period_days == 4.7);
    vg_interval bi;
    EXPECT(vg_interval_parameter(f, v, 1, 0.95, &bi) == VG_OK);
    NEAR(bi.low, bi.point - 1.96 * bi.std_error, 1e-12);
    vg_variance* too_wide = NULL;
    EXPECT(vg_variance_hac(s, f, 18, &too_wide) == VG_ERR_BANDWIDTH_TOO_LARGE);

    vg_crude_row crude[17];
    EXPECT(vg_crude_gammas(s, 0.95, crude, 17, &count) == VG_OK);
    EXPECT(count == 17);
    vg_proportion_row props[18];
    EXPECT(vg_proportion_intervals(s, 0.95, props, 18, &count) == VG_OK);
    EXPECT(props[0].low <= props[0].estimate && props[0].estimate <= props[0].high);

    vg_adjusted_r_row rt[17];
    EXPECT(vg_adjusted_r_series(s, 4.7, 0.7, rt, 17, &count) == VG_OK);
    NEAR(rt[16].R, 1.0247349195510027, 1e-12);

    const double horizons[] = {19, 20};
    vg_forecast_row fr[2];
    EXPECT(vg_forecast(f, v, horizons, 2, 2.0, fr) == VG_OK);
    EXPECT(fr[0].lower < fr[0].point && fr[0].point < fr[0].upper);
    EXPECT(vg_forecast(f, v, horizons, 2, -1.0, fr) == VG_ERR_NEGATIVE_C);

    const double grid[] = {0.0, 0.5, 1.0};
    vg_stability_row sr[3];
    EXPECT(vg_stability_region(&gi, grid, 3, sr) == VG_OK);
    EXPECT(sr[2].hi - sr[2].lo == 0.0);

    size_t len = 0;
    EXPECT(vg_series_to_csv(s, NULL, 0, &len) == VG_OK);
    EXPECT(len > 0);
    char small[8];
    EXPECT(vg_series_to_csv(s, small, sizeof small, &len) == VG_ERR_BUFFER_TOO_SMALL);
    char* text = malloc(len + 1);
    EXPECT(vg_series_to_csv(s, text, len + 1, &len) == VG_OK);
    EXPECT(strncmp(text, "t,label,sequenced,variant_count,total_cases,tested\n", 51) == 0);
    EXPECT(strlen(text) == len);
    free(text);

    double grid101[101];
    EXPECT(vg_lambda_grid(0.0, 1.0, 0.01, grid101, 101, &count) == VG_OK);
    EXPECT(count == 101 && grid101[100] == 1.0);
    EXPECT(vg_lambda_grid(0.0, 1.0, 0.01, grid101, 10, &count) == VG_ERR_BUFFER_TOO_SMALL);

    vg_series* w = NULL;
    EXPECT(vg_series_slice(s, 5, 8, &w) == VG_OK);
    EXPECT(vg_series_size(w) == 4);
    EXPECT(vg_series_slice(s, 100, 200, &w) == VG_ERR_WINDOW_OUT_OF_RANGE);

    vg_variance_free(v);
    vg_fit_free(f);
    vg_series_free(s);
}

static void test_scalar_helpers(void) {
    double out;
    EXPECT(vg_step_lambda(0.1, 1.86, &out) == VG_OK);
    NEAR(out, 0.17127071823204418, 1e-15);
    EXPECT(vg_step_lambda(1.5, 1.86, &out) == VG_ERR_INVALID_ARGUMENT);
    EXPECT(vg_rescale_advantage(1.28, 1.0, 7.0, &out) == VG_OK);
    NEAR(out, 5.629499534213121, 1e-12);
    EXPECT(vg_rescale_advantage(1.28, 0.0, 7.0, &out) == VG_ERR_NON_POSITIVE_PERIOD);
    EXPECT(vg_adjusted_r(200, 100, 200, 100, 4.7, 7.0, 0.7, &out) == VG_OK);
    NEAR(out, 1.149836371236125, 1e-12);
    vg_repro r;
    EXPECT(vg_infer_variant_r(0.9, 0.5, 1.5, &r) == VG_OK);
    NEAR(r.R_variant, 1.125, 1e-12);
    EXPECT(vg_infer_variant_r(0.0, 0.5, 1.5, &r) == VG_ERR_NON_POSITIVE_R);
    NEAR(vg_parzen_kernel(0.5), 0.25, 1e-15);

    const vg_interval a = {1.5169, 1.50, 1.53, 0.95, 4.7, 0};
    const vg_interval b = {2.17, 1.99, 2.36, 0.95, 4.7, 0};
    vg_interval c;
    EXPECT(vg_compose_advantages(&a, &b, VG_COMPOSE_ENDPOINT_PRODUCT, &c) == VG_OK);
    NEAR(c.low, 1.50 * 1.99, 1e-12);
    const vg_interval weekly = {1.86, 1.82, 1.89, 0.95, 7.0, 0};
    EXPECT(vg_compose_advantages(&a, &weekly, VG_COMPOSE_INDEPENDENT_LOGNORMAL, &c) == VG_ERR_PERIOD_MISMATCH);
}

static void test_multi_and_simulation(void) {
    const double gammas[] = {1.4, 2.1};
    const double initial[] = {0.97, 0.025, 0.005};
    int64_t sequenced[12];
    for (int i = 0; i < 12; ++i) sequenced[i] = 100000000;
    vg_sim_config cfg = {3, gammas, initial, 12, sequenced, 5, NULL, 1000.0, 7.0};

    vg_multi_series* ms = NULL;
    EXPECT(vg_expected_counts(&cfg, &ms) == VG_OK);
    EXPECT(vg_multi_size(ms) == 12 && vg_multi_variants(ms) == 3);
    EXPECT(vg_multi_variant_name(ms, 0) != NULL);
    vg_fit_options opt;
    vg_fit_options_default(&opt);
    opt.tolerance = 1e-4;
    vg_multi_fit* mf = NULL;
    EXPECT(vg_multi_fit_series(ms, &opt, &mf) == VG_OK);
    double alphas[2], betas[2];
    EXPECT(vg_multi_fit_params(mf, alphas, betas, 2) == VG_OK);
    NEAR(betas[1], log(2.1), 1e-6);
    vg_variance* mv = NULL;
    EXPECT(vg_multi_fit_variance(ms, mf, -1, &mv) == VG_OK);
    EXPECT(vg_variance_dim(mv) == 4);
    vg_interval mg;
    EXPECT(vg_multi_interval_gamma(mf, mv, 2, 7.0, 0.95, &mg) == VG_OK);
    NEAR(mg.point, 2.1, 1e-6);
    EXPECT(mg.low < mg.point && mg.point < mg.high);
    EXPECT(vg_multi_interval_gamma(mf, mv, 3, 7.0, 0.95, &mg) == VG_ERR_INVALID_INDEX);
    vg_multi_series* rotated = NULL;
    EXPECT(vg_multi_with_numeraire(ms, 2, &rotated) == VG_OK);
    EXPECT(strcmp(vg_multi_variant_name(rotated, 0), vg_multi_variant_name(ms, 2)) == 0);
    size_t mlen = 0;
    EXPECT(vg_multi_to_csv(rotated, NULL, 0, &mlen) == VG_OK && mlen > 0);
    vg_multi_free(rotated);
    vg_series* pair = NULL;
    EXPECT(vg_multi_marginalize(ms, 1, 2, &pair) == VG_OK);
    vg_fit* pf = NULL;
    EXPECT(vg_fit_series(pair, &opt, &pf) == VG_OK);
    vg_fit_summary ps;
    vg_fit_get_summary(pf, &ps);
    NEAR(ps.beta, betas[1] - betas[0], 1e-6);
    EXPECT(vg_multi_marginalize(ms, 0, 7, &pair) == VG_ERR_INVALID_INDEX);
    vg_fit_free(pf);
    vg_series_free(pair);
    vg_variance_free(mv);
    vg_multi_fit_free(mf);
    vg_multi_free(ms);

    double next[3];
    EXPECT(vg_step_lambda_multi(initial, gammas, 3, next) == VG_OK);
    NEAR(next[0] + next[1] + next[2], 1.0, 1e-15);

    const double g2[] = {1.86};
    const double init2[] = {0.997, 0.003};
    int64_t seq2[18];
    for (int i = 0; i < 18; ++i) seq2[i] = 3000;
    vg_sim_config c2 = {2, g2, init2, 18, seq2, 42, NULL, 1000.0, 7.0};
    vg_series* s1 = NULL;
    vg_series* s2 = NULL;
    EXPECT(vg_simulate(&c2, 7, &s1) == VG_OK);
    EXPECT(vg_simulate(&c2, 7, &s2) == VG_OK);
    vg_record r1, r2;
    for (size_t i = 0; i < 18; ++i) {
        vg_series_record(s1, i, &r1);
        vg_series_record(s2, i, &r2);
        EXPECT(r1.variant_count == r2.variant_count);
        EXPECT(r1.total_cases == VG_MISSING);
    }

    char path[] = "/tmp/vgrowth_capi_XXXXXX";
    const int fd = mkstemp(path);
    EXPECT(fd >= 0);
    EXPECT(vg_series_save_csv(s1, path) == VG_OK);
    vg_series* back = NULL;
    EXPECT(vg_series_load_csv(path, 7.0, &back) == VG_OK);
    vg_series_record(back, 17, &r2);
    vg_series_record(s1, 17, &r1);
    EXPECT(r1.variant_count == r2.variant_count && r1.sequenced == r2.sequenced);
    remove(path);
    vg_series_free(back);
    vg_series_free(s1);
    vg_series_free(s2);

    vg_recovery rec;
    EXPECT(vg_recovery_report(&c2, 20, -1, 0.95, &rec) == VG_OK);
    EXPECT(rec.replications == 20 && rec.failures == 0);
    NEAR(rec.true_gamma, 1.86, 0.0);
    cfg.n_variants = 1;
    EXPECT(vg_simulate_multi(&cfg, 0, &ms) == VG_ERR_INVALID_CONFIG);
}

int main(void) {
    test_status_and_errors();
    test_alpha_pipeline();
    test_scalar_helpers();
    test_multi_and_simulation();
    if (failures) {
        fprintf(stderr, "%d C API expectation(s) failed\n", failures);
        return 1;
    }
    puts("C API: all expectations met");
    return 0;
}
