#pragma once

// High-SNR secrecy outage: asymptotic channel laws for omega_RD -> inf
// with omega_SR = varphi * omega_RD, the psi helper integrals, the
// asymptotic breakdown, and the secrecy diversity order.

#include "channel_model.hpp"
#include "meijer_g.hpp"
#include "sop_types.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rfso {

struct AsymptoticConstants {
    std::vector<double> chi; // 3r entries, one per K2 exponent
    double phi_d = 0.0;      // lambda_D * omega_RD
    double varphi = 1.0;     // omega_SR / omega_RD
};

/// chi_k = ((hab)^r / (r^{2r} varphi))^{K2k} * prod_{j != k} Gamma(K2j - K2k)
///         / prod_j Gamma(K1j - K2k), the leading-order residue weights of
/// the CDF G-function.  Requires pairwise distinct K2 exponents.
inline AsymptoticConstants derive_asymptotic_constants(const SystemScenario& sc) {
    sc.validate();
    const FsoDerived d = derive_fso(sc.fso);
    const RfDerived rd = derive_rf(sc.rf_d);
    AsymptoticConstants c;
    c.phi_d = rd.phi;
    c.varphi = sc.varphi;
    const std::size_t nk = d.k2.size();
    for (std::size_t i = 0; i < nk; ++i)
        for (std::size_t j = i + 1; j < nk; ++j)
            if (std::abs(d.k2[i] - d.k2[j]) < 1e-6)
                throw std::domain_error(
                    "derive_asymptotic_constants: non-generic exponents (coincident K2 entries)");
    const double base = std::pow(d.h * sc.fso.a * sc.fso.b, sc.fso.r) /
                        (std::pow(sc.fso.r, 2.0 * sc.fso.r) * sc.varphi);
    c.chi.resize(nk);
    for (std::size_t k = 0; k < nk; ++k) {
        double logmag = d.k2[k] * std::log(base);
        double sign = 1.0;
        int s;
        for (std::size_t j = 0; j < nk; ++j) {
            if (j == k) continue;
            logmag += log_gamma_signed(d.k2[j] - d.k2[k], s);
            sign *= s;
        }
        for (double k1 : d.k1) {
            logmag -= log_gamma_signed(k1 - d.k2[k], s);
            sign *= s;
        }
        c.chi[k] = sign * std::exp(logmag);
        if (!std::isfinite(c.chi[k]))
            throw std::domain_error("derive_asymptotic_constants: non-finite chi");
    }
    return c;
}

/// Secrecy diversity order Gd = min{tau_D, xi^2/r, a/r, b/r}.
inline double secrecy_diversity_order(const SystemScenario& sc) {
    sc.validate();
    const RfDerived rd = derive_rf(sc.rf_d);
    const double r = sc.fso.r;
    double gd = static_cast<double>(rd.tau);
    gd = std::min(gd, sc.fso.xi * sc.fso.xi / r);
    gd = std::min(gd, sc.fso.a / r);
    gd = std::min(gd, sc.fso.b / r);
    return gd;
}

/// Asymptotic evaluation engine.  All omega arguments are the linear
/// omega_RD; the eavesdropper link keeps its finite parameters.  Tail
/// probabilities of the asymptotic laws enter as CDF complements, which
/// is where the truncated expansions remain meaningful.
class AsymptoticSop {
public:
    explicit AsymptoticSop(const SystemScenario& sc)
        : sc_(sc), consts_(derive_asymptotic_constants(sc)), fso_d_(derive_fso(sc.fso)),
          rd_(derive_rf(sc.rf_d)), re_(derive_rf(sc.rf_e)) {
        theta_ = sc.theta();
        th1_ = theta_ - 1.0;
    }

    const AsymptoticConstants& constants() const { return consts_; }
    const FsoDerived& fso_derived() const { return fso_d_; }
    const RfDerived& rf_d() const { return rd_; }
    const RfDerived& rf_e() const { return re_; }
    double theta() const { return theta_; }

    double fso_cdf(double omega_rd, double gamma) const {
        if (!(gamma > 0.0)) return 0.0;
        const auto& k2 = fso_d_.k2;
        double acc = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k)
            acc += consts_.chi[k] / k2[k] * std::pow(gamma / omega_rd, k2[k]);
        return fso_d_.I * acc;
    }

    double fso_pdf(double omega_rd, double gamma) const {
        if (!(gamma > 0.0)) return 0.0;
        const auto& k2 = fso_d_.k2;
        double acc = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k)
            acc += consts_.chi[k] * std::pow(gamma, k2[k] - 1.0) / std::pow(omega_rd, k2[k]);
        return fso_d_.I * acc;
    }

    double rf_cdf(double omega_rd, double gamma) const {
        if (!(gamma > 0.0)) return 0.0;
        return std::exp(rd_.tau * std::log(consts_.phi_d * gamma / omega_rd) -
                        std::lgamma(rd_.tau + 1.0));
    }

    double rf_pdf(double omega_rd, double gamma) const {
        if (!(gamma > 0.0)) return 0.0;
        return std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) +
                        (rd_.tau - 1.0) * std::log(gamma) -
                        std::lgamma(static_cast<double>(rd_.tau)));
    }

    /// psi2(c1, c2) = int_{Theta-1}^inf y^{c1} e^{-c2 y} f_SR^inf(y) dy.
    double psi2(double c1, double c2, double omega_rd) const {
        if (!(c2 > 0.0)) throw std::domain_error("psi2: c2 must be > 0");
        const auto& k2 = fso_d_.k2;
        double acc = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k)
            acc += consts_.chi[k] * upper_incomplete_gamma(k2[k] + c1, c2 * th1_) /
                   (std::pow(omega_rd, k2[k]) * std::pow(c2, k2[k] + c1));
        return fso_d_.I * acc;
    }

    /// psi1(c1, c2): nested tail moment of the asymptotic densities; the
    /// outer tail mass enters as 1 - F_SR^inf(Theta-1).
    double psi1(int c1, double c2, double omega_rd) const {
        if (c1 < 0) throw std::domain_error("psi1: c1 must be a non-negative integer");
        if (!(c2 > 0.0)) throw std::domain_error("psi1: c2 must be > 0");
        const int big_a = rd_.tau + c1;
        const double front = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                      std::lgamma(static_cast<double>(rd_.tau)) -
                                      big_a * std::log(c2));
        const double tail_sr = 1.0 - fso_cdf(omega_rd, th1_);
        const auto& k2 = fso_d_.k2;
        double inner_sum = 0.0;
        for (int n = 0; n < big_a; ++n)
            for (std::size_t k = 0; k < k2.size(); ++k)
                inner_sum += consts_.chi[k] * upper_incomplete_gamma(k2[k] + n, c2 * th1_) /
                             (gamma_fn(n + 1.0) * std::pow(omega_rd, k2[k]) *
                              std::pow(c2, k2[k]));
        const double gA = gamma_fn(static_cast<double>(big_a));
        const double upsA = lower_incomplete_gamma(static_cast<double>(big_a), c2 * th1_);
        return front * (gA * (tail_sr - fso_d_.I * inner_sum) - upsA * tail_sr);
    }

    /// Full asymptotic breakdown at a given omega_RD.  Refuses to
    /// evaluate outside the regime where the truncated expansions are
    /// meaningful.
    SopBreakdown terms(double omega_rd) const {
        if (!(omega_rd > 0.0)) throw std::domain_error("asym terms: omega_rd must be > 0");
        if (th1_ > 0.0 && (fso_cdf(omega_rd, th1_) > 0.5 || rf_cdf(omega_rd, th1_) > 0.5))
            throw std::domain_error("asym terms: outside asymptotic regime");
        SopBreakdown b;
        b.varrho = varrho_inf(omega_rd);
        if (th1_ > 0.0) {
            b.h11 = h11_inf(omega_rd);
            b.h12 = h12_inf(omega_rd);
            b.h13 = h13_inf(omega_rd);
            b.h21 = h21_inf(omega_rd);
            b.h22 = h22_inf(omega_rd);
            b.h23 = h23_inf(omega_rd);
        }
        b.h1 = b.h11 + b.h12 + b.h13;
        b.h2 = b.h21 + b.h22 + b.h23;
        b.sop = b.h1 + b.h2 + 1.0 - b.varrho;
        if (b.sop < 0.0) {
            b.sop = 0.0;
            b.clamped = true;
        }
        return b;
    }

    double h11_inf(double omega_rd) const {
        const auto& k2 = fso_d_.k2;
        const double lam_front = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                          std::lgamma(rd_.tau + 1.0));
        double first = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k)
            first += consts_.chi[k] * std::pow(th1_ / omega_rd, k2[k]) *
                     std::pow(th1_, rd_.tau) / (k2[k] + rd_.tau);
        first *= fso_d_.I * lam_front;

        const double front2 = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                       std::lgamma(static_cast<double>(rd_.tau)));
        double second = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k) {
            double sum_n = 0.0;
            for (int n = 0; n < re_.tau; ++n)
                sum_n += gamma_fn(static_cast<double>(rd_.tau + n)) / gamma_fn(n + 1.0) *
                         trunc_moment(k2[k], rd_.tau + n);
            second += consts_.chi[k] / std::pow(omega_rd, k2[k]) * sum_n;
        }
        second *= fso_d_.I * front2 / std::pow(re_.lambda, rd_.tau);
        return first - second;
    }

    double h12_inf(double omega_rd) const {
        const double tail_sr = 1.0 - fso_cdf(omega_rd, th1_);
        const double front = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                      std::lgamma(static_cast<double>(rd_.tau)));
        double sum = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            sum += lower_incomplete_gamma(static_cast<double>(rd_.tau + n), re_.lambda * th1_) /
                   (gamma_fn(n + 1.0) * std::pow(re_.lambda, rd_.tau));
        return tail_sr * (rf_cdf(omega_rd, th1_) - front * sum);
    }

    double h13_inf(double omega_rd) const {
        double part1 = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            for (int q = 0; q <= n; ++q)
                part1 += std::pow(re_.lambda, n) * ipow(1.0 - theta_, n - q) /
                         (std::pow(theta_, n) * gamma_fn(q + 1.0) * gamma_fn(n - q + 1.0)) *
                         psi1(q, re_.lambda / theta_, omega_rd);
        part1 *= std::exp(re_.lambda * th1_ / theta_);
        double part2 = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            part2 += std::pow(re_.lambda, n) / gamma_fn(n + 1.0) * psi1(n, re_.lambda, omega_rd);
        return part1 - part2;
    }

    double h21_inf(double omega_rd) const {
        const auto& k2 = fso_d_.k2;
        const double front = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                      std::lgamma(static_cast<double>(rd_.tau)));
        double first = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k)
            first += consts_.chi[k] * std::pow(th1_ / omega_rd, k2[k]) *
                     std::pow(th1_, rd_.tau) / (k2[k] * (k2[k] + rd_.tau));
        first *= fso_d_.I * front;

        double second = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k) {
            double sum_n = 0.0;
            for (int n = 0; n < re_.tau; ++n) {
                MeijerGSpec s;
                s.m = 1;
                s.n = 2;
                s.p = 2;
                s.q = 3;
                s.a_params = {1.0 - rd_.tau, 1.0};
                s.b_params = {k2[k] + n, 0.0, -static_cast<double>(rd_.tau)};
                s.argument = re_.lambda * th1_;
                sum_n += meijer_g_contour(s, 1e-11).value / gamma_fn(n + 1.0);
            }
            second += consts_.chi[k] /
                      (std::pow(omega_rd, k2[k]) * std::pow(re_.lambda, k2[k])) * sum_n;
        }
        second *= fso_d_.I * front * std::pow(th1_, rd_.tau);
        return first - second;
    }

    double h22_inf(double omega_rd) const {
        const auto& k2 = fso_d_.k2;
        const double tail_rd = 1.0 - rf_cdf(omega_rd, th1_);
        double sum = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            for (std::size_t k = 0; k < k2.size(); ++k)
                sum += consts_.chi[k] * lower_incomplete_gamma(k2[k] + n, re_.lambda * th1_) /
                       (gamma_fn(n + 1.0) * std::pow(omega_rd, k2[k]) *
                        std::pow(re_.lambda, k2[k]));
        return tail_rd * (fso_cdf(omega_rd, th1_) - fso_d_.I * sum);
    }

    double h23_inf(double omega_rd) const {
        const double rd_front = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                         std::lgamma(rd_.tau + 1.0));
        double part1 = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            for (int q = 0; q <= n; ++q)
                part1 += std::pow(re_.lambda, n) * ipow(1.0 - theta_, n - q) /
                         (std::pow(theta_, n) * gamma_fn(q + 1.0) * gamma_fn(n - q + 1.0)) *
                         (psi2(q, re_.lambda / theta_, omega_rd) -
                          rd_front * psi2(rd_.tau + q, re_.lambda / theta_, omega_rd));
        part1 *= std::exp(re_.lambda * th1_ / theta_);
        double part2 = 0.0;
        for (int n = 0; n < re_.tau; ++n)
            part2 += std::pow(re_.lambda, n) / gamma_fn(n + 1.0) *
                     (rd_front * psi2(rd_.tau + n, re_.lambda, omega_rd) -
                      psi2(n, re_.lambda, omega_rd));
        return part1 + part2;
    }

    double varrho_inf(double omega_rd) const {
        const auto& k2 = fso_d_.k2;
        const double gte = gamma_fn(static_cast<double>(re_.tau));
        const double rd_front = std::exp(rd_.tau * std::log(consts_.phi_d / omega_rd) -
                                         std::lgamma(rd_.tau + 1.0));
        double v = 1.0;
        v -= rd_front * gamma_fn(static_cast<double>(re_.tau + rd_.tau)) /
             (gte * std::pow(re_.lambda, rd_.tau));
        double second = 0.0, third = 0.0;
        for (std::size_t k = 0; k < k2.size(); ++k) {
            second += consts_.chi[k] * gamma_fn(k2[k] + re_.tau) /
                      (k2[k] * std::pow(omega_rd, k2[k]) *
                       std::pow(re_.lambda, k2[k] + re_.tau));
            third += consts_.chi[k] * gamma_fn(k2[k] + rd_.tau + re_.tau) /
                     (k2[k] * std::pow(omega_rd, k2[k]) * std::pow(re_.lambda, k2[k] + rd_.tau));
        }
        v -= fso_d_.I * std::pow(re_.lambda, re_.tau) / gte * second;
        v += fso_d_.I * rd_front / gte * third;
        return v;
    }

private:
    static double ipow(double x, int k) {
        double v = 1.0;
        for (int i = 0; i < k; ++i) v *= x;
        return v;
    }

    // int_0^{Theta-1} x^{K-1} P(M, lambda_E x) dx as the positive tail
    // series sum_{q>=M} lambda^q LowerGamma(K+q, lambda(Theta-1)) / (q! lambda^{K+q});
    // algebraically equal to the subtractive bracket of the finite form
    // but free of its cancellation.
    double trunc_moment(double kexp, int m_terms) const {
        double sum = 0.0;
        int consec = 0;
        for (int q = m_terms; q < m_terms + 400; ++q) {
            const double term = std::exp(-kexp * std::log(re_.lambda) - std::lgamma(q + 1.0) +
                                         std::lgamma(kexp + q)) *
                                gamma_p(kexp + q, re_.lambda * th1_);
            sum += term;
            consec = (term <= 1e-14 * sum) ? consec + 1 : 0;
            if (consec >= 2) return sum;
        }
        throw precision_error("trunc_moment: series did not converge", sum, sum);
    }

    SystemScenario sc_;
    AsymptoticConstants consts_;
    FsoDerived fso_d_;
    RfDerived rd_, re_;
    double theta_ = 1.0, th1_ = 0.0;
};

} // namespace rfso
