// Acceptance suite: one pass/fail line per criterion, non-zero exit if
// any criterion fails.  Tolerances are pinned here, in code.

#include <rfso/analytic_sop.hpp>
#include <rfso/asymptotic_sop.hpp>
#include <rfso/experiments.hpp>
#include <rfso/montecarlo.hpp>
#include <rfso/oracle_quadrature.hpp>

#include "fixtures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace rfso;
using rfso::testing::make_asym_scenario;
using rfso::testing::make_scenario;
using rfso::testing::ScenarioConfig;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& text) {
    std::printf("criterion %d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct GridPointResult {
    SopBreakdown analytic;
    double oracle_terms[7]; // h11..h23, varrho
    double oracle_sop;
    SimulationResult mc;
};

// shared 2x3x3 grid at the fig2 base parameters
std::vector<GridPointResult> run_main_grid(double& max_ao_sop, double& max_ao_term,
                                           double& max_mc_sigmas) {
    std::vector<GridPointResult> out;
    max_ao_sop = max_ao_term = max_mc_sigmas = 0.0;
    for (int r : {1, 2})
        for (double db : {5.0, 15.0, 25.0})
            for (double rs : {0.01, 0.1, 0.5}) {
                ScenarioConfig c;
                c.r = r;
                c.omega_sr_db = db;
                c.rs = rs;
                const auto sc = make_scenario(c);
                GridPointResult g;
                g.analytic = AnalyticSop(sc).exact_sop();
                OracleEngine orc(sc);
                g.oracle_terms[0] = orc.h_term(HTermId::H11);
                g.oracle_terms[1] = orc.h_term(HTermId::H12);
                g.oracle_terms[2] = orc.h_term(HTermId::H13);
                g.oracle_terms[3] = orc.h_term(HTermId::H21);
                g.oracle_terms[4] = orc.h_term(HTermId::H22);
                g.oracle_terms[5] = orc.h_term(HTermId::H23);
                g.oracle_terms[6] = orc.varrho();
                g.oracle_sop = g.oracle_terms[0] + g.oracle_terms[1] + g.oracle_terms[2] +
                               g.oracle_terms[3] + g.oracle_terms[4] + g.oracle_terms[5] +
                               1.0 - g.oracle_terms[6];
                McConfig cfg;
                cfg.n_samples = 10'000'000;
                cfg.master_seed = 0xACC0DE;
                cfg.n_workers = 1;
                g.mc = simulate(sc, cfg);

                max_ao_sop = std::max(max_ao_sop, std::abs(g.analytic.sop - g.oracle_sop));
                const double a_terms[7] = {g.analytic.h11, g.analytic.h12, g.analytic.h13,
                                           g.analytic.h21, g.analytic.h22, g.analytic.h23,
                                           g.analytic.varrho};
                for (int i = 0; i < 7; ++i)
                    max_ao_term =
                        std::max(max_ao_term, std::abs(a_terms[i] - g.oracle_terms[i]));
                const double se = std::max(g.mc.sop.std_error, 1e-12);
                max_mc_sigmas =
                    std::max(max_mc_sigmas, std::abs(g.analytic.sop - g.mc.sop.mean) / se);
                max_mc_sigmas =
                    std::max(max_mc_sigmas, std::abs(g.oracle_sop - g.mc.sop.mean) / se);
                out.push_back(g);
            }
    return out;
}

std::vector<double> sop_curve(const ScenarioConfig& base, const std::vector<double>& grid_db) {
    std::vector<double> out;
    for (double db : grid_db) {
        ScenarioConfig c = base;
        c.omega_sr_db = db;
        out.push_back(AnalyticSop(make_scenario(c)).exact_sop().sop);
    }
    return out;
}

bool dominates(const std::vector<double>& smaller, const std::vector<double>& larger,
               double tol = 1e-9) {
    for (std::size_t i = 0; i < smaller.size(); ++i)
        if (smaller[i] > larger[i] + tol) return false;
    return true;
}

template <class Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    return d;
}

void criterion_1_2_3() {
    const double t0 = now_s();
    double max_ao_sop, max_ao_term, max_mc_sigmas;
    run_main_grid(max_ao_sop, max_ao_term, max_mc_sigmas);
    const double elapsed = now_s() - t0;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "three-way agreement on the 2x3x3 grid: |analytic-oracle| = %.2e (<= 1e-5), "
                  "worst MC deviation = %.2f sigma (<= 3), runtime %.0f s (<= 900)",
                  max_ao_sop, max_mc_sigmas, elapsed);
    report(1, max_ao_sop <= 1e-5 && max_mc_sigmas <= 3.0 && elapsed <= 900.0, buf);

    std::snprintf(buf, sizeof(buf),
                  "term-level equivalence: worst |H_xy or varrho - oracle| = %.2e (<= 1e-6)",
                  max_ao_term);
    report(2, max_ao_term <= 1e-6, buf);

    // Rs = 0 collapse across the r x omega grid
    double worst_sop = 0.0, worst_p0 = 0.0;
    for (int r : {1, 2})
        for (double db : {5.0, 15.0, 25.0}) {
            ScenarioConfig c;
            c.r = r;
            c.omega_sr_db = db;
            c.rs = 0.0;
            const auto sc = make_scenario(c);
            AnalyticSop an(sc);
            const auto b = an.exact_sop();
            worst_sop = std::max(worst_sop, std::abs(b.sop - (1.0 - b.varrho)));
            worst_p0 = std::max(worst_p0, std::abs(an.prob_positive_secrecy() - b.varrho));
        }
    std::snprintf(buf, sizeof(buf),
                  "Rs=0 collapse: |SOP-(1-varrho)| = %.2e, |P0-varrho| = %.2e (<= 1e-12)",
                  worst_sop, worst_p0);
    report(3, worst_sop <= 1e-12 && worst_p0 <= 1e-12, buf);
}

void criterion_4() {
    struct Regime {
        int m, nd, r;
        const char* label;
    };
    const Regime regimes[] = {{1, 1, 1, "m=1,Nd=1 (Gd=1)"},
                              {2, 1, 1, "xi=1.1,r=1 (Gd=1.21)"},
                              {2, 3, 2, "r=2 (Gd=0.605)"}};
    bool all = true;
    std::string detail;
    for (const auto& rg : regimes) {
        const auto lo = make_asym_scenario(50.0, rg.m, rg.nd, rg.r);
        const auto hi = make_asym_scenario(60.0, rg.m, rg.nd, rg.r);
        const double slope = std::log10(AnalyticSop(hi).exact_sop().sop) -
                             std::log10(AnalyticSop(lo).exact_sop().sop);
        const double gd = secrecy_diversity_order(lo);
        const double rel = std::abs(slope + gd) / gd;
        all = all && rel <= 0.10;
        char buf[96];
        std::snprintf(buf, sizeof(buf), " [%s slope %.3f vs %.3f, off %.1f%%]", rg.label, slope,
                      -gd, 100.0 * rel);
        detail += buf;
    }
    report(4, all, "diversity-order slopes over 50..60 dB within 10%:" + detail);
}

void criterion_5() {
    // fig2 preset grid: detection, pointing, monotonicity and the floor
    const std::vector<double> grid{5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    ScenarioConfig base; // fig2 base: r=1, xi=1.1, Nd=3, weak turbulence, eta=3, alpha=0.5
    const auto s_base = sop_curve(base, grid);

    bool mono = true;
    for (std::size_t i = 1; i < s_base.size(); ++i)
        mono = mono && s_base[i] <= s_base[i - 1] + 1e-9;
    const bool floor = s_base.back() > 1e-9;

    ScenarioConfig v = base;
    v.r = 2;
    const auto s_r2 = sop_curve(v, grid);
    const bool hd_wins = dominates(s_base, s_r2);

    v = base;
    v.xi = 4.0;
    const auto s_xi = sop_curve(v, grid);
    const bool xi_wins = dominates(s_xi, s_base);

    // fig5 preset grid: antenna count and turbulence strength
    const std::vector<double> grid5{0.0, 8.0, 16.0, 24.0, 32.0, 40.0};
    const auto s_base5 = sop_curve(base, grid5);
    v = base;
    v.nd = 2;
    const bool nd_wins = dominates(s_base5, sop_curve(v, grid5));
    v = base;
    v.a = 2.064;
    v.b = 1.342;
    const bool turb = dominates(s_base5, sop_curve(v, grid5));

    // figs 3/4: high-omega_SR points of their 10..60 dB preset grids,
    // where the curves sit on their RF-limited floors
    const std::vector<double> top{55.0, 60.0};
    v = base;
    v.eta = 2.0;
    const bool eta_wins = dominates(sop_curve(v, top), sop_curve(base, top));
    v = base;
    v.alpha = 0.25;
    const bool alpha_wins = dominates(sop_curve(base, top), sop_curve(v, top));

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "figure orderings: mono=%d floor=%d hd<=imdd=%d xi=%d nd=%d turb=%d eta=%d "
                  "alpha=%d (tolerance 1e-9)",
                  mono, floor, hd_wins, xi_wins, nd_wins, turb, eta_wins, alpha_wins);
    report(5, mono && floor && hd_wins && xi_wins && nd_wins && turb && eta_wins && alpha_wins,
           buf);
}

void criterion_6() {
    const double t0 = now_s();
    bool ok = true;

    // recurrence and complementarity
    for (double a : {0.5, 2.0, 7.5, 20.0})
        for (double x : {0.01, 1.0, 10.0, 50.0}) {
            const double lhs = lower_incomplete_gamma(a + 1.0, x);
            const double rhs = a * lower_incomplete_gamma(a, x) - std::pow(x, a) * std::exp(-x);
            ok = ok && std::abs(lhs - rhs) <= 1e-10 * std::max({std::abs(lhs), std::abs(rhs), 1e-280});
            const double sum = lower_incomplete_gamma(a, x) + upper_incomplete_gamma(a, x);
            ok = ok && std::abs(sum - gamma_fn(a)) <= 1e-12 * gamma_fn(a);
        }

    // Meijer identity suite
    for (double z : {0.3, 1.0, 2.5}) {
        MeijerGSpec e;
        e.m = 1;
        e.n = 0;
        e.p = 0;
        e.q = 1;
        e.b_params = {0.0};
        e.argument = z;
        const auto rc = meijer_g_contour(e);
        ok = ok && std::abs(rc.value - std::exp(-z)) <= 10.0 * rc.abs_error_estimate + 1e-13;
    }
    {
        MeijerGSpec u;
        u.m = 1;
        u.n = 1;
        u.p = 1;
        u.q = 2;
        u.a_params = {1.0};
        u.b_params = {1.0, 0.0};
        u.argument = 1.0;
        const auto rc = meijer_g_contour(u);
        ok = ok && std::abs(rc.value - lower_incomplete_gamma(1.0, 1.0)) <= 1e-10;
    }
    for (double a : {0.7, 2.3}) {
        MeijerGSpec bnm;
        bnm.m = 1;
        bnm.n = 1;
        bnm.p = 1;
        bnm.q = 1;
        bnm.a_params = {1.0 - a};
        bnm.b_params = {0.0};
        bnm.argument = 0.6;
        const auto rc = meijer_g_contour(bnm);
        const double expect = std::pow(1.6, -a) * gamma_fn(a);
        ok = ok && std::abs(rc.value - expect) <= 10.0 * rc.abs_error_estimate + 1e-12;
    }

    // contour vs residue cross-check on the CDF-class rows
    for (double z : {0.05, 0.5, 2.0}) {
        MeijerGSpec s;
        s.m = 3;
        s.n = 1;
        s.p = 2;
        s.q = 4;
        s.a_params = {1.0, 2.21};
        s.b_params = {1.21, 2.902, 2.51, 0.0};
        s.argument = z;
        const auto rc = meijer_g_contour(s);
        const auto rr = meijer_g_residue(s);
        ok = ok && std::abs(rc.value - rr.value) <=
                       rc.abs_error_estimate + rr.abs_error_estimate + 1e-13 * std::abs(rc.value);
    }

    // monotone refinement
    {
        MeijerGSpec s;
        s.m = 3;
        s.n = 1;
        s.p = 2;
        s.q = 4;
        s.a_params = {1.0, 2.21};
        s.b_params = {1.21, 2.902, 2.51, 0.0};
        s.argument = 0.8;
        double h = 0.05;
        auto prev = meijer_g_contour(s, 1e-10, h);
        for (int i = 0; i < 3; ++i) {
            h *= 0.5;
            const auto next = meijer_g_contour(s, 1e-10, h);
            ok = ok && next.abs_error_estimate <=
                           prev.abs_error_estimate + 10.0 * (1e-14 * std::abs(next.value));
            prev = next;
        }
    }

    const double elapsed = now_s() - t0;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "special-function identity suite in %.1f s (< 10 s)",
                  elapsed);
    report(6, ok && elapsed < 10.0, buf);
}

void criterion_7() {
    const int n = 100000;
    const double crit = 1.6276 / std::sqrt(static_cast<double>(n)); // 1% level
    bool ok = true;
    double worst = 0.0;

    ScenarioConfig c;
    const auto sc = make_scenario(c);
    FsoChannel fso(sc.fso);
    FsoSampler sampler(fso);
    std::vector<double> xs(n);
    RandomStream rng(314159, 0);
    for (auto& x : xs) x = sampler.sample(rng);
    const double d_fso = ks_statistic(std::move(xs), [&](double g) { return fso.cdf(g); });
    worst = std::max(worst, d_fso / crit);
    ok = ok && d_fso < crit;

    for (const RfLinkParams& link : {sc.rf_d, sc.rf_e}) {
        const RfDerived d = derive_rf(link);
        std::vector<double> ys(n);
        RandomStream r2(951413, 1);
        for (auto& y : ys) y = sample_rf(d, r2);
        const double dk = ks_statistic(std::move(ys), [&](double g) { return rf_cdf(d, g); });
        worst = std::max(worst, dk / crit);
        ok = ok && dk < crit;
    }

    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "sampler fidelity (KS, n=1e5, 1%% level): worst D/D_crit = %.2f (< 1)", worst);
    report(7, ok, buf);
}

void criterion_8() {
    auto spec = find_preset("fig2");
    spec.mc.n_workers = 1;
    const auto a = run(spec);
    spec.mc.n_workers = 3;
    const auto b = run(spec);
    spec.mc.n_workers = 5;
    const auto c = run(spec);
    const bool ok = a.csv == b.csv && a.csv == c.csv;
    report(8, ok, "fig2 preset CSV byte-identical across 1/3/5 workers at a fixed seed");
}

} // namespace

int main() {
    std::printf("acceptance suite: dual-hop mixed RF-FSO SWIPT secrecy outage laboratory\n");
    const double t0 = now_s();
    criterion_1_2_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("total runtime %.0f s; %d criterion(s) failed\n", now_s() - t0, g_failures);
    return g_failures == 0 ? 0 : 1;
}
