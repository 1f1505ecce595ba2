#pragma once

// Closed-form secrecy outage probability: the decomposition
// Pout = H1 + H2 + 1 - varrho, its six sub-terms, the helper integrals
// G0..G3 behind them, and the probability of strictly positive secrecy
// capacity.  Everything reduces to incomplete gammas and Meijer
// G-functions of the FSO parameter rows.
//
// An AnalyticSop instance owns per-scenario caches and is meant to be
// used by one thread; independent scenarios evaluate concurrently.

#include "channel_model.hpp"
#include "sop_types.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>

namespace rfso {

class AnalyticSop {
public:
    explicit AnalyticSop(const SystemScenario& sc, SeriesPolicy policy = {})
        : sc_(sc), pol_(policy), fso_(sc.fso), rd_(derive_rf(sc.rf_d)), re_(derive_rf(sc.rf_e)) {
        sc_.validate();
        pol_.validate();
        theta_ = sc_.theta();
        th1_ = theta_ - 1.0;
        if (th1_ > 0.0) {
            f_sr_th_ = fso_.cdf(th1_);
            tail_sr_th_ = 1.0 - f_sr_th_;
        }
    }

    const FsoChannel& fso() const { return fso_; }
    const RfDerived& rf_d() const { return rd_; }
    const RfDerived& rf_e() const { return re_; }
    double theta() const { return theta_; }

    // --- helper integrals -------------------------------------------------

    /// G1(z1, z2) = int_0^{Theta-1} x^{z1-1} e^{-z2 x} G^{3,0}_{1,3}[B x^{1/r}] dx.
    double g1(int z1, double z2) const {
        if (z1 < 0) throw std::domain_error("g1: z1 must be >= 0");
        if (th1_ <= 0.0) return 0.0;
        const auto key = cache_key(z1, z2);
        if (auto it = g1_cache_.find(key); it != g1_cache_.end()) return it->second;

        const auto& d = fso_.derived();
        const double zarg = d.rho * th1_;
        double sum = 0.0;
        double first = 0.0;
        int consec = 0;
        int s = 0;
        for (; s < pol_.max_terms; ++s) {
            const int c = z1 + s;
            const double coef = d.Xi * sign_pow(s) * std::pow(z2, s) * std::pow(th1_, c) /
                                gamma_fn(s + 1.0);
            double term = 0.0;
            if (coef != 0.0) {
                const auto gv = meijer_g_contour(g1_spec(c, zarg), 1e-11);
                term = coef * gv.value;
                err_acc_ += std::abs(coef) * gv.abs_error_estimate;
            }
            sum += term;
            if (s == 0) first = std::abs(term);
            if (std::abs(term) > pol_.divergence_guard * std::max(first, 1e-300))
                throw precision_error("g1: series diverging (large z2*(Theta-1))", sum,
                                      std::abs(term));
            consec = (std::abs(term) <= pol_.rel_term_tol * std::max(std::abs(sum), 1e-300))
                         ? consec + 1
                         : 0;
            if (consec >= 3 || z2 == 0.0) {
                ++s;
                break;
            }
        }
        if (s >= pol_.max_terms)
            throw precision_error("g1: series exceeded max_terms", sum, std::abs(sum));
        note_series(s);
        g1_cache_.emplace(key, sum);
        return sum;
    }

    /// G0(alpha, beta) = int_0^{Theta-1} LowerGamma(alpha, beta x) f_SR(x) dx,
    /// summed over the stable tail rearrangement of the finite-sum form.
    double g0(int alpha, double beta) const {
        if (alpha < 1) throw std::domain_error("g0: alpha must be a positive integer");
        if (beta < 0.0) throw std::domain_error("g0: beta must be >= 0");
        if (th1_ <= 0.0 || beta == 0.0) return 0.0;
        const auto key = cache_key(alpha, beta);
        if (auto it = g0_cache_.find(key); it != g0_cache_.end()) return it->second;

        const auto& d = fso_.derived();
        const double lg_beta = std::log(beta);
        double sum = 0.0;
        int consec = 0;
        int q = alpha;
        for (; q < alpha + pol_.max_terms; ++q) {
            const double coef = std::exp(q * lg_beta - std::lgamma(q + 1.0));
            const double term = coef * g1(q, beta);
            sum += term;
            consec = (std::abs(term) <= pol_.rel_term_tol * std::max(std::abs(sum), 1e-300))
                         ? consec + 1
                         : 0;
            if (consec >= 3) {
                ++q;
                break;
            }
        }
        if (q >= alpha + pol_.max_terms)
            throw precision_error("g0: series exceeded max_terms", sum, std::abs(sum));
        note_series(q - alpha);
        const double out = d.A * gamma_fn(static_cast<double>(alpha)) * sum;
        g0_cache_.emplace(key, out);
        return out;
    }

    /// G2(alpha, beta) = int_{Theta-1}^inf x^{-1} LowerGamma(alpha, beta x)
    ///                   A G^{3,0}_{1,3}[B x^{1/r}] dx.
    double g2(int alpha, double beta) const {
        if (alpha < 1) throw std::domain_error("g2: alpha must be a positive integer");
        if (!(beta > 0.0)) throw std::domain_error("g2: beta must be > 0");
        const auto key = cache_key(alpha, beta);
        if (auto it = g2_cache_.find(key); it != g2_cache_.end()) return it->second;

        const auto& d = fso_.derived();
        const auto gv = meijer_g_contour(g2_spec(alpha, d.rho / beta), 1e-11);
        err_acc_ += d.A * d.Xi * gv.abs_error_estimate;
        const double out = d.A * d.Xi * gv.value - g0(alpha, beta);
        g2_cache_.emplace(key, out);
        return out;
    }

    /// G3(alpha, beta) = A int_{Theta-1}^inf y^{alpha} e^{-beta y}
    ///                   G^{3,0}_{1,3}[B y^{1/r}] dy, integer alpha >= -1.
    double g3(int alpha, double beta) const {
        if (!(beta > 0.0)) throw std::domain_error("g3: beta must be > 0");
        const auto key = cache_key(alpha, beta);
        if (auto it = g3_cache_.find(key); it != g3_cache_.end()) return it->second;

        const auto& d = fso_.derived();
        const auto gv = meijer_g_contour(g3_spec(alpha, d.rho / beta), 1e-11);
        const double front = d.A * d.Xi * std::pow(beta, -(alpha + 1.0));
        err_acc_ += front * gv.abs_error_estimate;
        const double out = front * gv.value - d.A * g1(alpha + 1, beta);
        g3_cache_.emplace(key, out);
        return out;
    }

    // --- SOP terms ---------------------------------------------------------

    double h11() const {
        if (th1_ <= 0.0) return 0.0;
        const double gtd = gamma_fn(static_cast<double>(rd_.tau));
        double sum = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            sum += std::pow(re_.lambda, n) * g0(rd_.tau + n, rd_.lambda + re_.lambda) /
                   (gamma_fn(n + 1.0) * std::pow(rd_.lambda + re_.lambda, rd_.tau + n));
        return g0(rd_.tau, rd_.lambda) / gtd - std::pow(rd_.lambda, rd_.tau) / gtd * sum;
    }

    double h12() const {
        if (th1_ <= 0.0) return 0.0;
        const double gtd = gamma_fn(static_cast<double>(rd_.tau));
        const double lam = rd_.lambda + re_.lambda;
        double sum = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            sum += std::pow(re_.lambda, n) *
                   lower_incomplete_gamma(rd_.tau + n, lam * th1_) /
                   (gamma_fn(n + 1.0) * std::pow(lam, rd_.tau + n));
        const double f_rd = rf_cdf(rd_, th1_);
        return tail_sr_th_ * (f_rd - std::pow(rd_.lambda, rd_.tau) / gtd * sum);
    }

    double h13() const {
        if (th1_ <= 0.0) return 0.0;
        const double gtd = gamma_fn(static_cast<double>(rd_.tau));
        const double beta1 = rd_.lambda + re_.lambda / theta_;
        const double beta2 = rd_.lambda + re_.lambda;

        double part1 = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            for (int t = 0; t <= n; ++t) {
                const double h131 = g2(rd_.tau + t, beta1) -
                                    lower_incomplete_gamma(rd_.tau + t, beta1 * th1_) * tail_sr_th_;
                part1 += std::pow(re_.lambda, n) * int_pow(1.0 - theta_, n - t) * h131 /
                         (gamma_fn(t + 1.0) * gamma_fn(n - t + 1.0) * std::pow(theta_, n)) *
                         std::pow(beta1, -(rd_.tau + t));
            }
        part1 *= std::exp(re_.lambda * th1_ / theta_) * std::pow(rd_.lambda, rd_.tau) / gtd;

        double part2 = 0.0;
        for (int n = 0; n < re_.tau; ++n) {
            const double h132 = g2(rd_.tau + n, beta2) -
                                lower_incomplete_gamma(rd_.tau + n, beta2 * th1_) * tail_sr_th_;
            part2 += std::pow(re_.lambda, n) * h132 /
                     (gamma_fn(n + 1.0) * std::pow(beta2, rd_.tau + n));
        }
        part2 *= std::pow(rd_.lambda, rd_.tau) / gtd;
        return part1 - part2;
    }

    double h21() const {
        if (th1_ <= 0.0) return 0.0;
        const auto& d = fso_.derived();
        const double gtd = gamma_fn(static_cast<double>(rd_.tau));
        const double zarg = d.rho * th1_;

        // first series: the F_SR * f_RD moment
        double first = 0.0;
        {
            double first0 = 0.0;
            int consec = 0;
            int s = 0;
            for (; s < pol_.max_terms; ++s) {
                const int u1 = rd_.tau + s;
                const double coef = sign_pow(s) *
                                    std::exp(u1 * (std::log(rd_.lambda) + std::log(th1_)) -
                                             std::lgamma(s + 1.0));
                const auto gv = meijer_g_contour(h21_first_spec(u1, zarg), 1e-11);
                const double term = coef * gv.value;
                err_acc_ += std::abs(coef) * gv.abs_error_estimate;
                first += term;
                if (s == 0) first0 = std::abs(term);
                if (std::abs(term) > pol_.divergence_guard * std::max(first0, 1e-300))
                    throw precision_error("h21: outer series diverging", first, std::abs(term));
                consec = (std::abs(term) <=
                          pol_.rel_term_tol * std::max(std::abs(first), 1e-300))
                             ? consec + 1
                             : 0;
                if (consec >= 3) {
                    ++s;
                    break;
                }
            }
            if (s >= pol_.max_terms)
                throw precision_error("h21: outer series exceeded max_terms", first,
                                      std::abs(first));
            note_series(s);
            first *= d.I / gtd;
        }

        // second block: triple series with per-series guards
        double second = 0.0;
        for (int n = 0; n < re_.tau; ++n) {
            double sum_s = 0.0;
            double first_s = 0.0;
            int consec_s = 0;
            int s = 0;
            for (; s < pol_.max_terms; ++s) {
                double sum_t = 0.0;
                double first_t = 0.0;
                int consec_t = 0;
                int t = 0;
                for (; t < pol_.max_terms; ++t) {
                    const int u2 = rd_.tau + n + s + t;
                    const double lcoef = (rd_.tau + t) * std::log(rd_.lambda) +
                                         (n + s) * std::log(re_.lambda) + u2 * std::log(th1_) -
                                         std::lgamma(n + 1.0) - std::lgamma(s + 1.0) -
                                         std::lgamma(t + 1.0);
                    const double coef = sign_pow(s + t) * std::exp(lcoef);
                    const auto gv =
                        meijer_g_contour(h21_second_spec(n + s, u2, zarg), 1e-11);
                    const double term = coef * gv.value;
                    err_acc_ += std::abs(coef) * gv.abs_error_estimate;
                    sum_t += term;
                    if (t == 0) first_t = std::abs(term);
                    if (std::abs(term) > pol_.divergence_guard * std::max(first_t, 1e-300))
                        throw precision_error("h21: inner series diverging", sum_t,
                                              std::abs(term));
                    consec_t = (std::abs(term) <=
                                pol_.rel_term_tol * std::max(std::abs(sum_t), 1e-300))
                                   ? consec_t + 1
                                   : 0;
                    if (consec_t >= 2) {
                        ++t;
                        break;
                    }
                }
                if (t >= pol_.max_terms)
                    throw precision_error("h21: inner series exceeded max_terms", sum_t,
                                          std::abs(sum_t));
                note_series(t);
                sum_s += sum_t;
                if (s == 0) first_s = std::max(std::abs(sum_t), 1e-300);
                if (std::abs(sum_t) > pol_.divergence_guard * first_s)
                    throw precision_error("h21: middle series diverging", sum_s,
                                          std::abs(sum_t));
                consec_s = (std::abs(sum_t) <=
                            pol_.rel_term_tol * std::max(std::abs(sum_s), 1e-300))
                               ? consec_s + 1
                               : 0;
                if (consec_s >= 2) {
                    ++s;
                    break;
                }
            }
            if (s >= pol_.max_terms)
                throw precision_error("h21: middle series exceeded max_terms", sum_s,
                                      std::abs(sum_s));
            note_series(s);
            second += sum_s;
        }
        second *= d.A * d.Xi / gtd;
        return first - second;
    }

    double h22() const {
        if (th1_ <= 0.0) return 0.0;
        const auto& d = fso_.derived();
        double sum = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            sum += std::pow(re_.lambda, n) * g1(n, re_.lambda) / gamma_fn(n + 1.0);
        return rf_tail(rd_, th1_) * (f_sr_th_ - d.A * sum);
    }

    double h23() const {
        if (th1_ <= 0.0) return 0.0;
        const double beta1 = rd_.lambda + re_.lambda / theta_;
        const double beta2 = rd_.lambda + re_.lambda;

        double part1 = 0.0;
        for (int p = 0; p < rd_.tau; ++p)
            for (int n = 0; n < re_.tau; ++n)
                for (int t = 0; t <= n; ++t)
                    part1 += int_pow(1.0 - theta_, n - t) * std::pow(rd_.lambda, p) *
                             std::pow(re_.lambda, n) /
                             (gamma_fn(p + 1.0) * gamma_fn(t + 1.0) * gamma_fn(n - t + 1.0) *
                              std::pow(theta_, n)) *
                             g3(p + t - 1, beta1);
        part1 *= std::exp(re_.lambda * th1_ / theta_);

        double part2 = 0.0;
        for (int p = 0; p < rd_.tau; ++p)
            for (int n = 0; n < re_.tau; ++n)
                part2 += std::pow(rd_.lambda, p) * std::pow(re_.lambda, n) /
                         (gamma_fn(p + 1.0) * gamma_fn(n + 1.0)) * g3(p + n - 1, beta2);
        return part1 - part2;
    }

    /// varrho = Pr{gamma_RE <= gamma_eq,D}; independent of the secrecy rate.
    double varrho() const {
        const auto& d = fso_.derived();
        const double lam = rd_.lambda + re_.lambda;
        double sum = 0.0;
        for (int p = 0; p < rd_.tau; ++p) {
            const auto gv = meijer_g_contour(varrho_spec(re_.tau + p, d.rho / lam), 1e-11);
            err_acc_ += d.I * gv.abs_error_estimate;
            const double bracket = gamma_fn(static_cast<double>(re_.tau + p)) - d.I * gv.value;
            sum += std::pow(rd_.lambda, p) /
                   (std::pow(lam, re_.tau + p) * gamma_fn(p + 1.0)) * bracket;
        }
        return std::pow(re_.lambda, re_.tau) / gamma_fn(static_cast<double>(re_.tau)) * sum;
    }

    SopBreakdown exact_sop() const {
        SopBreakdown b;
        err_acc_ = 0.0;
        b.varrho = clamp_probability(varrho(), "varrho", b);
        if (th1_ > 0.0) {
            series_max_ = 0;
            b.h11 = clamp_probability(h11(), "h11", b);
            b.series_terms_used["h11"] = series_max_;
            series_max_ = 0;
            b.h12 = clamp_probability(h12(), "h12", b);
            b.series_terms_used["h12"] = series_max_;
            series_max_ = 0;
            b.h13 = clamp_probability(h13(), "h13", b);
            b.series_terms_used["h13"] = series_max_;
            series_max_ = 0;
            b.h21 = clamp_probability(h21(), "h21", b);
            b.series_terms_used["h21"] = series_max_;
            series_max_ = 0;
            b.h22 = clamp_probability(h22(), "h22", b);
            b.series_terms_used["h22"] = series_max_;
            series_max_ = 0;
            b.h23 = clamp_probability(h23(), "h23", b);
            b.series_terms_used["h23"] = series_max_;
        }
        b.h1 = b.h11 + b.h12 + b.h13;
        b.h2 = b.h21 + b.h22 + b.h23;
        b.sop = b.h1 + b.h2 + 1.0 - b.varrho;
        if (b.sop < 0.0 || b.sop > 1.0) {
            if (b.sop < -1e-6 || b.sop > 1.0 + 1e-6)
                throw std::runtime_error("exact_sop: assembled SOP outside [0,1] beyond tolerance");
            b.sop = std::clamp(b.sop, 0.0, 1.0);
            b.clamped = true;
        }
        b.error_estimate = err_acc_;
        return b;
    }

    /// P0 = varrho (the H-terms vanish at Rs = 0; both routes are checked).
    double prob_positive_secrecy() const {
        const double rho = varrho();
        SystemScenario zs = sc_;
        zs.rs = 0.0;
        AnalyticSop zero(zs, pol_);
        const auto b = zero.exact_sop();
        if (std::abs((1.0 - b.sop) - rho) > 1e-9)
            throw std::runtime_error("prob_positive_secrecy: Rs=0 collapse check failed");
        return rho;
    }

private:
    static double sign_pow(int s) { return (s % 2 == 0) ? 1.0 : -1.0; }
    static double int_pow(double x, int k) {
        double v = 1.0;
        for (int i = 0; i < k; ++i) v *= x;
        return v;
    }
    static std::pair<int, std::int64_t> cache_key(int a, double b) {
        std::int64_t bits;
        static_assert(sizeof(bits) == sizeof(b));
        std::memcpy(&bits, &b, sizeof(bits));
        return {a, bits};
    }

    double clamp_probability(double v, const char* name, SopBreakdown& b) const {
        if (v < 0.0) {
            if (v < -1e-6)
                throw std::runtime_error(std::string(name) +
                                         ": negative beyond tolerance: " + std::to_string(v));
            b.clamped = true;
            return 0.0;
        }
        if (v > 1.0) {
            if (v > 1.0 + 1e-6)
                throw std::runtime_error(std::string(name) + ": exceeds 1 beyond tolerance");
            b.clamped = true;
            return 1.0;
        }
        return v;
    }

    void note_series(int used) const { series_max_ = std::max(series_max_, used); }

    // --- Meijer parameter rows ---------------------------------------------

    MeijerGSpec g1_spec(int c, double z) const {
        const auto& d = fso_.derived();
        const int r = sc_.fso.r;
        MeijerGSpec s;
        s.m = 3 * r;
        s.n = 1;
        s.p = r + 1;
        s.q = 3 * r + 1;
        s.a_params.push_back(1.0 - c);
        s.a_params.insert(s.a_params.end(), d.k1.begin(), d.k1.end());
        s.b_params = d.k2;
        s.b_params.push_back(-static_cast<double>(c));
        s.argument = z;
        return s;
    }

    MeijerGSpec g2_spec(int alpha, double z) const {
        const auto& d = fso_.derived();
        const int r = sc_.fso.r;
        MeijerGSpec s;
        s.m = 3 * r + 1;
        s.n = 1;
        s.p = r + 2;
        s.q = 3 * r + 1;
        s.a_params = {1.0 - alpha, 1.0};
        s.a_params.insert(s.a_params.end(), d.k1.begin(), d.k1.end());
        s.b_params = d.k2;
        s.b_params.push_back(0.0);
        s.argument = z;
        return s;
    }

    MeijerGSpec g3_spec(int alpha, double z) const {
        const auto& d = fso_.derived();
        const int r = sc_.fso.r;
        MeijerGSpec s;
        s.m = 3 * r;
        s.n = 1;
        s.p = r + 1;
        s.q = 3 * r;
        s.a_params = {-static_cast<double>(alpha)};
        s.a_params.insert(s.a_params.end(), d.k1.begin(), d.k1.end());
        s.b_params = d.k2;
        s.argument = z;
        return s;
    }

    MeijerGSpec h21_first_spec(int u1, double z) const {
        const auto& d = fso_.derived();
        const int r = sc_.fso.r;
        MeijerGSpec s;
        s.m = 3 * r;
        s.n = 2;
        s.p = r + 2;
        s.q = 3 * r + 2;
        s.a_params = {1.0 - u1, 1.0};
        s.a_params.insert(s.a_params.end(), d.k1.begin(), d.k1.end());
        s.b_params = d.k2;
        s.b_params.push_back(0.0);
        s.b_params.push_back(-static_cast<double>(u1));
        s.argument = z;
        return s;
    }

    MeijerGSpec h21_second_spec(int ns, int u2, double z) const {
        const auto& d = fso_.derived();
        const int r = sc_.fso.r;
        MeijerGSpec s;
        s.m = 3 * r;
        s.n = 2;
        s.p = r + 2;
        s.q = 3 * r + 2;
        s.a_params = {1.0 - ns, 1.0 - u2};
        s.a_params.insert(s.a_params.end(), d.k1.begin(), d.k1.end());
        s.b_params = d.k2;
        s.b_params.push_back(-static_cast<double>(u2));
        s.b_params.push_back(-static_cast<double>(ns));
        s.argument = z;
        return s;
    }

    MeijerGSpec varrho_spec(int c, double z) const {
        const auto& d = fso_.derived();
        const int r = sc_.fso.r;
        MeijerGSpec s;
        s.m = 3 * r;
        s.n = 2;
        s.p = r + 2;
        s.q = 3 * r + 1;
        s.a_params = {1.0, 1.0 - c};
        s.a_params.insert(s.a_params.end(), d.k1.begin(), d.k1.end());
        s.b_params = d.k2;
        s.b_params.push_back(0.0);
        s.argument = z;
        return s;
    }

    SystemScenario sc_;
    SeriesPolicy pol_;
    FsoChannel fso_;
    RfDerived rd_, re_;
    double theta_ = 1.0;
    double th1_ = 0.0;
    double f_sr_th_ = 0.0;
    double tail_sr_th_ = 1.0;

    mutable std::map<std::pair<int, std::int64_t>, double> g0_cache_, g1_cache_, g2_cache_,
        g3_cache_;
    mutable double err_acc_ = 0.0;
    mutable int series_max_ = 0;
};

/// Assemble the full closed-form breakdown for a scenario.
inline SopBreakdown exact_sop(const SystemScenario& sc, SeriesPolicy policy = {}) {
    return AnalyticSop(sc, policy).exact_sop();
}

/// Probability of strictly positive secrecy capacity.
inline double prob_positive_secrecy(const SystemScenario& sc, SeriesPolicy policy = {}) {
    return AnalyticSop(sc, policy).prob_positive_secrecy();
}

} // namespace rfso
