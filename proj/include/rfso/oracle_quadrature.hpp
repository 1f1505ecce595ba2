#pragma once

// Ground-truth engine: every H-term, varrho, the G0..G3 helpers and the
// asymptotic psi moments evaluated by direct adaptive quadrature of
// their defining integrals, using only channel PDFs/CDFs.  The FSO
// density itself is the Meijer kernel of the channel model; the
// independence of this module rests on avoiding the derived closed
// forms, not on avoiding G-functions entirely.

#include "asymptotic_sop.hpp"
#include "channel_model.hpp"
#include "quadrature.hpp"
#include "sop_types.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rfso {

enum class HTermId { H11, H12, H13, H21, H22, H23 };
enum class GFunId { G0, G1, G2, G3, Psi1, Psi2 };

struct QuadPolicy {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    int max_depth = 24;         // interval budget scales with this
    double tail_cutoff = 1e-12; // CDF-complement mass below which tails are cut

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_cutoff > 0.0))
            throw std::invalid_argument("QuadPolicy: tolerances must be positive");
        if (max_depth < 20)
            throw std::invalid_argument("QuadPolicy: max_depth must be >= 20");
    }

    int max_intervals() const { return max_depth * 250; }
};

namespace detail {

// Prefix integrals of a fixed integrand over [a, b]: adaptive panels
// with stored partial sums, point queries finish the containing panel
// with one Gauss-Kronrod pass.  The initial segmentation is geometric
// so that mass concentrated near the lower end cannot hide from the
// top-level rule on a very wide domain.
class CumulativeIntegral {
public:
    template <class F>
    CumulativeIntegral(F f, double a, double b, double tol, int budget)
        : f_(std::move(f)), a_(a) {
        struct Seg {
            double x0, x1, value, err;
        };
        std::vector<Seg> stack;
        {
            double lo = a;
            double width = std::max(1e-3 * (b - a), 0.5 * std::max(std::abs(a), 0.125));
            std::vector<std::pair<double, double>> panels;
            while (lo < b) {
                const double hi = std::min(b, lo + width);
                panels.emplace_back(lo, hi);
                lo = hi;
                width *= 2.0;
            }
            for (auto it = panels.rbegin(); it != panels.rend(); ++it) {
                Seg s{it->first, it->second, 0.0, 0.0};
                gk15(f_, s.x0, s.x1, s.value, s.err);
                stack.push_back(s);
            }
        }
        std::vector<Seg> done;
        const double local_tol = tol / 4.0;
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            if (s.err < std::max(local_tol * (s.x1 - s.x0) / (b - a), 1e-17) ||
                static_cast<int>(done.size() + stack.size()) > budget) {
                done.push_back(s);
                continue;
            }
            const double mid = 0.5 * (s.x0 + s.x1);
            Seg l{s.x0, mid, 0.0, 0.0}, r{mid, s.x1, 0.0, 0.0};
            gk15(f_, l.x0, l.x1, l.value, l.err);
            gk15(f_, r.x0, r.x1, r.value, r.err);
            stack.push_back(r);
            stack.push_back(l);
        }
        std::sort(done.begin(), done.end(),
                  [](const Seg& u, const Seg& v) { return u.x0 < v.x0; });
        x0_.reserve(done.size());
        x1_.reserve(done.size());
        prefix_.reserve(done.size());
        double acc = 0.0;
        for (const auto& s : done) {
            x0_.push_back(s.x0);
            x1_.push_back(s.x1);
            prefix_.push_back(acc);
            acc += s.value;
        }
        total_ = acc;
        b_ = b;
    }

    double upto(double x) const {
        if (x <= a_) return 0.0;
        if (x >= b_) return total_;
        std::size_t lo = 0, hi = x0_.size() - 1;
        while (hi > lo) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (x0_[mid] <= x)
                lo = mid;
            else
                hi = mid - 1;
        }
        double v, e;
        gk15(f_, x0_[lo], x, v, e);
        return prefix_[lo] + v;
    }

    double total() const { return total_; }

private:
    std::function<double(double)> f_;
    double a_ = 0.0, b_ = 0.0, total_ = 0.0;
    std::vector<double> x0_, x1_, prefix_;
};

} // namespace detail

class OracleEngine {
public:
    explicit OracleEngine(const SystemScenario& sc, QuadPolicy policy = {})
        : sc_(sc), pol_(policy), fso_(sc.fso), rd_(derive_rf(sc.rf_d)), re_(derive_rf(sc.rf_e)) {
        sc_.validate();
        pol_.validate();
        theta_ = sc_.theta();
        th1_ = theta_ - 1.0;
    }

    /// Integrate f over [a, cut] in geometrically growing panels, so that
    /// near-field mass on a wide tail domain is never skipped.
    template <class F>
    double chunked(F&& f, double a, double cut, double abs_scale = 1.0) const {
        double lo = a;
        double width = 0.5 * std::max(std::abs(a), 0.125);
        double total = 0.0;
        while (lo < cut) {
            const double hi = std::min(cut, lo + width);
            total += integrate(f, lo, hi, pol_.abs_tol * 0.05 * abs_scale, pol_.rel_tol,
                               pol_.max_intervals())
                         .value;
            lo = hi;
            width *= 2.0;
        }
        return total;
    }

    const FsoChannel& fso() const { return fso_; }

    double phi3(double y) const {
        return rf_cdf(re_, y) - rf_cdf(re_, (y + 1.0 - theta_) / theta_);
    }

    // --- exact H-terms ------------------------------------------------------

    double h_term(HTermId id) const {
        if (th1_ <= 0.0) return 0.0;
        switch (id) {
        case HTermId::H11: {
            auto inner = [&](double x) {
                return integrate([&](double y) { return rf_cdf(re_, y) * rf_pdf(rd_, y); }, 0.0,
                                 x, pol_.abs_tol * 0.05, pol_.rel_tol * 0.1,
                                 pol_.max_intervals())
                    .value;
            };
            return integrate([&](double x) { return fso_.pdf(x) * inner(x); }, 0.0, th1_,
                             pol_.abs_tol * 0.5, pol_.rel_tol, pol_.max_intervals())
                .value;
        }
        case HTermId::H12: {
            const double tail_sr = 1.0 - fso_.cdf(th1_);
            const double inner =
                integrate([&](double y) { return rf_cdf(re_, y) * rf_pdf(rd_, y); }, 0.0, th1_,
                          pol_.abs_tol * 0.1, pol_.rel_tol, pol_.max_intervals())
                    .value;
            return tail_sr * inner;
        }
        case HTermId::H13: {
            // order exchanged: int_{th1}^inf phi3(y) f_RD(y) (1 - F_SR(y)) dy
            const double cut = rf_cut(rd_);
            return chunked([&](double y) { return phi3(y) * rf_pdf(rd_, y) *
                                                  (1.0 - fso_.cdf(y)); },
                           th1_, cut);
        }
        case HTermId::H21: {
            detail::CumulativeIntegral cum(
                [&](double y) { return rf_cdf(re_, y) * fso_.pdf(y); }, 0.0, th1_,
                pol_.abs_tol * 0.05, pol_.max_intervals());
            return integrate([&](double x) { return rf_pdf(rd_, x) * cum.upto(x); }, 0.0, th1_,
                             pol_.abs_tol * 0.5, pol_.rel_tol, pol_.max_intervals())
                .value;
        }
        case HTermId::H22: {
            const double inner =
                integrate([&](double y) { return rf_cdf(re_, y) * fso_.pdf(y); }, 0.0, th1_,
                          pol_.abs_tol * 0.1, pol_.rel_tol, pol_.max_intervals())
                    .value;
            return rf_tail(rd_, th1_) * inner;
        }
        case HTermId::H23: {
            const double cut = fso_cut();
            return chunked([&](double y) { return phi3(y) * fso_.pdf(y) * rf_tail(rd_, y); },
                           th1_, cut);
        }
        }
        throw std::logic_error("h_term: unknown id");
    }

    /// H13 in its nested double-integral form (Fubini cross-check).
    double h13_nested() const {
        if (th1_ <= 0.0) return 0.0;
        const double cut_y = rf_cut(rd_);
        detail::CumulativeIntegral cum([&](double y) { return phi3(y) * rf_pdf(rd_, y); }, th1_,
                                       cut_y, pol_.abs_tol * 0.05, pol_.max_intervals());
        const double cut_x = fso_cut();
        return chunked([&](double x) { return fso_.pdf(x) * cum.upto(x); }, th1_, cut_x);
    }

    /// H23 in its nested double-integral form (Fubini cross-check).
    double h23_nested() const {
        if (th1_ <= 0.0) return 0.0;
        const double cut = std::max(rf_cut(rd_), fso_cut());
        detail::CumulativeIntegral cum([&](double y) { return phi3(y) * fso_.pdf(y); }, th1_,
                                       cut, pol_.abs_tol * 0.05, pol_.max_intervals());
        return chunked([&](double x) { return rf_pdf(rd_, x) * cum.upto(x); }, th1_, cut);
    }

    /// varrho through the min-law composition of exact CDFs.
    double varrho() const {
        const double cut = rf_cut(re_);
        return chunked(
            [&](double x) { return (1.0 - fso_.cdf(x)) * rf_tail(rd_, x) * rf_pdf(re_, x); },
            0.0, cut);
    }

    /// varrho through the algebraically expanded equivalent-SNR CDF.
    double varrho_expanded() const {
        const double cut = rf_cut(re_);
        auto f_eqd = [&](double x) {
            double sum = 1.0, term = 1.0;
            for (int p = 1; p < rd_.tau; ++p) {
                term *= rd_.lambda * x / p;
                sum += term;
            }
            const double e = std::exp(-rd_.lambda * x) * sum;
            return 1.0 - e + fso_.cdf(x) * e;
        };
        const double expect = chunked([&](double x) { return f_eqd(x) * rf_pdf(re_, x); },
                                      0.0, cut);
        return 1.0 - expect;
    }

    /// Assembled oracle SOP.
    double sop() const {
        double h = 0.0;
        for (auto id : {HTermId::H11, HTermId::H12, HTermId::H13, HTermId::H21, HTermId::H22,
                        HTermId::H23})
            h += h_term(id);
        return h + 1.0 - varrho();
    }

    // --- defining integrals of the closed-form helpers ----------------------

    double g0(double alpha, double beta) const {
        if (th1_ <= 0.0) return 0.0;
        return integrate(
                   [&](double x) {
                       return lower_incomplete_gamma(alpha, beta * x) * fso_.pdf(x);
                   },
                   0.0, th1_, pol_.abs_tol * 0.1, pol_.rel_tol, pol_.max_intervals())
            .value;
    }

    double g1(double z1, double z2) const {
        if (th1_ <= 0.0) return 0.0;
        const auto& d = fso_.derived();
        return integrate(
                   [&](double x) {
                       return std::pow(x, z1 - 1.0) * std::exp(-z2 * x) *
                              fso_.kernel(d.B * std::pow(x, 1.0 / sc_.fso.r));
                   },
                   0.0, th1_, pol_.abs_tol * 0.1, pol_.rel_tol, pol_.max_intervals())
            .value;
    }

    double g2(double alpha, double beta) const {
        const double cut = fso_cut();
        return chunked(
            [&](double x) { return lower_incomplete_gamma(alpha, beta * x) * fso_.pdf(x); },
            th1_, cut);
    }

    double g3(double alpha, double beta) const {
        const auto& d = fso_.derived();
        const double cut = std::min(fso_cut(), exp_cut(beta));
        return d.A * chunked(
                         [&](double y) {
                             return std::pow(y, alpha) * std::exp(-beta * y) *
                                    fso_.kernel(d.B * std::pow(y, 1.0 / sc_.fso.r));
                         },
                         th1_, cut);
    }

    // --- asymptotic-density oracles ------------------------------------------

    double psi2(double c1, double c2, double omega_rd) const {
        const auto& asym = asym_engine();
        const double cut = exp_cut(c2);
        return chunked(
            [&](double y) {
                return std::pow(y, c1) * std::exp(-c2 * y) * asym.fso_pdf(omega_rd, y);
            },
            th1_, cut, 0.2);
    }

    double psi1(int c1, double c2, double omega_rd) const {
        const auto& asym = asym_engine();
        const double cut = exp_cut(c2);
        auto inner_f = [&](double y) {
            return std::pow(y, static_cast<double>(c1)) * std::exp(-c2 * y) *
                   asym.rf_pdf(omega_rd, y);
        };
        detail::CumulativeIntegral cum(inner_f, th1_, cut, pol_.abs_tol * 0.01,
                                       pol_.max_intervals());
        const double inner_total = cum.total();
        // outer tail mass of the asymptotic law enters as a CDF complement
        const double reg = inner_total * (1.0 - asym.fso_cdf(omega_rd, th1_));
        const double corr = chunked(
            [&](double x) { return (inner_total - cum.upto(x)) * asym.fso_pdf(omega_rd, x); },
            th1_, cut, 0.2);
        return reg - corr;
    }

    double asym_h_term(HTermId id, double omega_rd) const {
        if (th1_ <= 0.0) return 0.0;
        const auto& asym = asym_engine();
        switch (id) {
        case HTermId::H11: {
            auto inner = [&](double x) {
                return integrate(
                           [&](double y) { return rf_cdf(re_, y) * asym.rf_pdf(omega_rd, y); },
                           0.0, x, pol_.abs_tol * 0.05, pol_.rel_tol, pol_.max_intervals())
                    .value;
            };
            return integrate([&](double x) { return asym.fso_pdf(omega_rd, x) * inner(x); },
                             0.0, th1_, pol_.abs_tol * 0.5, pol_.rel_tol, pol_.max_intervals())
                .value;
        }
        case HTermId::H12: {
            const double inner =
                integrate([&](double y) { return rf_cdf(re_, y) * asym.rf_pdf(omega_rd, y); },
                          0.0, th1_, pol_.abs_tol * 0.1, pol_.rel_tol, pol_.max_intervals())
                    .value;
            return (1.0 - asym.fso_cdf(omega_rd, th1_)) * inner;
        }
        case HTermId::H13: {
            const double cut = exp_cut(re_.lambda / theta_);
            auto inner_f = [&](double y) { return phi3(y) * asym.rf_pdf(omega_rd, y); };
            detail::CumulativeIntegral cum(inner_f, th1_, cut, pol_.abs_tol * 0.02,
                                           pol_.max_intervals());
            const double total = cum.total();
            const double reg = total * (1.0 - asym.fso_cdf(omega_rd, th1_));
            const double corr = chunked(
                [&](double x) { return (total - cum.upto(x)) * asym.fso_pdf(omega_rd, x); },
                th1_, cut, 0.4);
            return reg - corr;
        }
        case HTermId::H21: {
            auto inner = [&](double x) {
                return integrate(
                           [&](double y) { return rf_cdf(re_, y) * asym.fso_pdf(omega_rd, y); },
                           0.0, x, pol_.abs_tol * 0.05, pol_.rel_tol, pol_.max_intervals())
                    .value;
            };
            return integrate([&](double x) { return asym.rf_pdf(omega_rd, x) * inner(x); }, 0.0,
                             th1_, pol_.abs_tol * 0.5, pol_.rel_tol, pol_.max_intervals())
                .value;
        }
        case HTermId::H22: {
            const double inner =
                integrate([&](double y) { return rf_cdf(re_, y) * asym.fso_pdf(omega_rd, y); },
                          0.0, th1_, pol_.abs_tol * 0.1, pol_.rel_tol, pol_.max_intervals())
                    .value;
            return (1.0 - asym.rf_cdf(omega_rd, th1_)) * inner;
        }
        case HTermId::H23: {
            const double cut = exp_cut(re_.lambda / theta_);
            return chunked(
                [&](double y) {
                    return (1.0 - asym.rf_cdf(omega_rd, y)) * phi3(y) *
                           asym.fso_pdf(omega_rd, y);
                },
                th1_, cut);
        }
        }
        throw std::logic_error("asym_h_term: unknown id");
    }

    double asym_varrho(double omega_rd) const {
        const auto& asym = asym_engine();
        const double cut = rf_cut(re_);
        auto f_eqd = [&](double x) {
            const double fs = asym.fso_cdf(omega_rd, x);
            const double fr = asym.rf_cdf(omega_rd, x);
            return fr + fs - fr * fs;
        };
        const double expect = chunked([&](double x) { return f_eqd(x) * rf_pdf(re_, x); },
                                      0.0, cut);
        return 1.0 - expect;
    }

    double asym_sop(double omega_rd) const {
        double h = 0.0;
        for (auto id : {HTermId::H11, HTermId::H12, HTermId::H13, HTermId::H21, HTermId::H22,
                        HTermId::H23})
            h += asym_h_term(id, omega_rd);
        return h + 1.0 - asym_varrho(omega_rd);
    }

private:
    // upper limit where the Gamma-law complement drops below the policy mass
    double rf_cut(const RfDerived& d) const {
        double y = std::max(th1_, 1.0 / d.lambda);
        while (rf_tail(d, y) > pol_.tail_cutoff) y *= 2.0;
        return y;
    }

    // upper limit where the FSO complement drops below the policy mass
    double fso_cut() const {
        double y = std::max(th1_ * 2.0, sc_.fso.omega_sr);
        while (1.0 - fso_.cdf(y) > pol_.tail_cutoff && y < 1e200) y *= 2.0;
        return y;
    }

    // upper limit for exp(-c y)-damped integrands
    double exp_cut(double c) const {
        return std::max(th1_ * 2.0, (45.0 + 12.0 * std::log1p(1.0 / c)) / c);
    }

    const AsymptoticSop& asym_engine() const {
        if (!asym_) asym_.emplace(sc_);
        return *asym_;
    }

    SystemScenario sc_;
    QuadPolicy pol_;
    FsoChannel fso_;
    RfDerived rd_, re_;
    double theta_ = 1.0, th1_ = 0.0;
    mutable std::optional<AsymptoticSop> asym_;
};

} // namespace rfso
