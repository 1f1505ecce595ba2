#pragma once

// Numerical Meijer G-function for real positive arguments and real
// parameter rows.  The primary method integrates the defining
// Mellin-Barnes integral along a vertical contour; a residue (power)
// series is available as an independent cross-check when the b-row
// poles are well separated.

#include "special_functions.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rfso {

enum class GMethod { contour_quadrature, residue_series, identity_shortcut };

struct MeijerGSpec {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<double> a_params; // top row, size p
    std::vector<double> b_params; // bottom row, size q
    double argument = 0.0;

    void validate() const {
        if (m < 0 || n < 0 || p < 0 || q < 0 || m > q || n > p)
            throw std::invalid_argument("MeijerGSpec: order constraints 0<=m<=q, 0<=n<=p violated");
        if (p > 16 || q > 16)
            throw std::invalid_argument("MeijerGSpec: orders larger than 16 not supported");
        if (static_cast<int>(a_params.size()) != p || static_cast<int>(b_params.size()) != q)
            throw std::invalid_argument("MeijerGSpec: parameter row sizes must match p and q");
        if (!(argument > 0.0) || !std::isfinite(argument))
            throw std::invalid_argument("MeijerGSpec: argument must be positive and finite");
        for (double v : a_params)
            if (!std::isfinite(v)) throw std::invalid_argument("MeijerGSpec: non-finite a-row entry");
        for (double v : b_params)
            if (!std::isfinite(v)) throw std::invalid_argument("MeijerGSpec: non-finite b-row entry");
    }
};

struct EvalResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    GMethod method_used = GMethod::contour_quadrature;
};

/// Thrown when no vertical line can separate the left and right pole
/// sets of the Mellin-Barnes integrand.
class unseparable_contour_error : public std::runtime_error {
public:
    explicit unseparable_contour_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

struct MellinBarnesKernel {
    // numerator: Gamma(b_j - s), j < m, and Gamma(1 - a_j + s), j < n
    // denominator: Gamma(1 - b_j + s), j >= m, and Gamma(a_j - s), j >= n
    std::vector<double> bm, an, bq, ap;

    explicit MellinBarnesKernel(const MeijerGSpec& g) {
        bm.assign(g.b_params.begin(), g.b_params.begin() + g.m);
        bq.assign(g.b_params.begin() + g.m, g.b_params.end());
        an.assign(g.a_params.begin(), g.a_params.begin() + g.n);
        ap.assign(g.a_params.begin() + g.n, g.a_params.end());
    }

    std::complex<double> log_w(std::complex<double> s) const {
        std::complex<double> lw(0.0, 0.0);
        for (double b : bm) lw += log_gamma(b - s);
        for (double a : an) lw += log_gamma(1.0 - a + s);
        for (double b : bq) lw -= log_gamma(1.0 - b + s);
        for (double a : ap) lw -= log_gamma(a - s);
        return lw;
    }

    double right_pole_min() const {
        return *std::min_element(bm.begin(), bm.end());
    }

    bool has_left_poles() const { return !an.empty(); }

    double left_pole_max() const {
        return *std::max_element(an.begin(), an.end()) - 1.0;
    }
};

// Decay order of |W| along the vertical line: |W(sigma+it)| ~ |t|^rho *
// exp(-cstar*pi*|t|).  cstar > 0 is required for the contour method.
inline double contour_decay_exponent(const MeijerGSpec& g) {
    return g.m + g.n - 0.5 * (g.p + g.q);
}

// The abscissa must separate the pole sets; within the admissible band
// it is placed where the t=0 integrand magnitude is smallest (a saddle
// proxy).  A plain midpoint loses all precision once series shifts push
// the left poles far out while the argument stays small.
inline double pick_sigma(const MellinBarnesKernel& k, double ln_z) {
    const double bmin = k.right_pole_min();
    auto logmag = [&](double sigma) {
        return k.log_w(std::complex<double>(sigma, 0.0)).real() + sigma * ln_z;
    };
    if (k.has_left_poles()) {
        const double lmax = k.left_pole_max();
        const double gap = bmin - lmax;
        if (gap < 1e-6)
            throw unseparable_contour_error(
                "meijer_g: unseparable contour (pole gap " + std::to_string(gap) + ")");
        const double margin = std::min(0.45, 0.1 * gap);
        const double lo = lmax + margin, hi = bmin - margin;
        double best_sigma = 0.5 * (lo + hi);
        double best_mag = logmag(best_sigma);
        for (int i = 0; i <= 64; ++i) {
            const double sigma = lo + (hi - lo) * i / 64.0;
            const double mag = logmag(sigma);
            if (mag < best_mag) {
                best_mag = mag;
                best_sigma = sigma;
            }
        }
        return best_sigma;
    }
    // No left poles: the abscissa is free below bmin.
    double best_sigma = bmin - 0.5;
    double best_mag = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 120; ++i) {
        const double sigma = bmin - 0.3 - 0.5 * i;
        const double mag = logmag(sigma);
        if (mag < best_mag) {
            best_mag = mag;
            best_sigma = sigma;
        } else if (mag > best_mag + 40.0) {
            break;
        }
    }
    return best_sigma;
}

struct ContourSum {
    double value = 0.0;
    double abs_terms = 0.0; // sum of |terms| at the same scaling, for the noise floor
};

// Trapezoid sum over t >= 0 of Re[ exp(log_w + s ln z - scale) ], with the
// t=0 node at half weight.  `vals` holds the scaled complex terms on the
// grid t_k = k*h.
inline ContourSum trapezoid(const std::vector<std::complex<double>>& vals, double h, int stride) {
    double acc = 0.5 * vals[0].real();
    double mag = 0.5 * std::abs(vals[0]);
    for (std::size_t k = stride; k < vals.size(); k += stride) {
        acc += vals[k].real();
        mag += std::abs(vals[k]);
    }
    const double w = h * stride / pi;
    return {acc * w, mag * w};
}

} // namespace detail

/// Evaluate by numerical Mellin-Barnes contour integration along the
/// vertical line Re(s) = sigma.  `h_override` forces a fixed step
/// (used by the refinement property tests); 0 means adaptive.
inline EvalResult meijer_g_contour(const MeijerGSpec& g, double rel_tol = 1e-10,
                                   double h_override = 0.0) {
    g.validate();
    if (g.m < 1)
        throw std::invalid_argument("meijer_g_contour: requires m >= 1");
    if (detail::contour_decay_exponent(g) <= 0.0)
        throw std::invalid_argument("meijer_g_contour: integrand does not decay on vertical lines");

    const detail::MellinBarnesKernel kernel(g);
    const double ln_z = std::log(g.argument);
    const double sigma = detail::pick_sigma(kernel, ln_z);

    // Scan the magnitude profile to find the truncation point: stop once
    // the integrand stays below 1e-18 x running maximum for 32
    // consecutive scan nodes.
    const double h_scan = 0.25;
    double max_logmag = -std::numeric_limits<double>::infinity();
    int below = 0;
    double t_max = 0.0;
    for (int k = 0;; ++k) {
        const double t = k * h_scan;
        const double lm = kernel.log_w({sigma, t}).real() + sigma * ln_z;
        max_logmag = std::max(max_logmag, lm);
        below = (lm < max_logmag - 41.5) ? below + 1 : 0; // ln(1e-18)
        if (below >= 32) {
            t_max = t;
            break;
        }
        if (t > 4000.0)
            throw precision_error("meijer_g_contour: integrand failed to decay", 0.0, HUGE_VAL);
    }
    const double scale = max_logmag;

    auto term = [&](double t) {
        const std::complex<double> lw = kernel.log_w({sigma, t});
        const std::complex<double> le(lw.real() + sigma * ln_z - scale, lw.imag() + t * ln_z);
        return std::exp(le);
    };

    double h = (h_override > 0.0)
                   ? h_override
                   : std::min(0.25, 2.0 * pi / (8.0 * (std::abs(ln_z) + 4.0)));
    std::vector<std::complex<double>> vals;
    const auto fill = [&](double step) {
        const std::size_t count = static_cast<std::size_t>(t_max / step) + 1;
        if (vals.empty()) {
            vals.resize(count);
            for (std::size_t k = 0; k < count; ++k) vals[k] = term(k * step);
        } else {
            std::vector<std::complex<double>> next(count);
            for (std::size_t k = 0; k < count; ++k)
                next[k] = (k % 2 == 0 && k / 2 < vals.size()) ? vals[k / 2] : term(k * step);
            vals.swap(next);
        }
    };

    fill(h);
    detail::ContourSum coarse = detail::trapezoid(vals, h, 1);
    detail::ContourSum fine = coarse;
    double err = std::numeric_limits<double>::infinity();
    const double amp = std::exp(scale);
    const int max_halvings = (h_override > 0.0) ? 1 : 14;
    for (int level = 0; level < max_halvings; ++level) {
        h *= 0.5;
        fill(h);
        coarse = fine;
        fine = detail::trapezoid(vals, h, 1);
        err = std::abs(fine.value - coarse.value);
        const double noise = fine.abs_terms * 1e-15;
        if (err <= std::max(rel_tol * std::abs(fine.value), noise)) break;
        if (vals.size() > 600000)
            break;
    }

    const double noise = fine.abs_terms * 1e-15;
    const double tail = std::abs(vals.back()) * h * 64.0 / pi;
    const double abs_err = amp * (err + noise + tail);
    const double value = amp * fine.value;
    if (!std::isfinite(value))
        throw precision_error("meijer_g_contour: non-finite result", value, abs_err);
    if (h_override == 0.0 && err > 1e3 * std::max(rel_tol * std::abs(fine.value), noise))
        throw precision_error("meijer_g_contour: precision not reached", value, abs_err);
    return {value, abs_err, GMethod::contour_quadrature};
}

/// True when the residue (power) series is numerically trustworthy:
/// b-row poles simple and separated, no numerator gamma near a pole,
/// and the series converges for this argument.
inline bool residue_series_applicable(const MeijerGSpec& g, double pole_gap_tol = 1e-3) {
    if (g.m < 1) return false;
    if (g.p > g.q) return false;
    if (g.p == g.q && g.argument >= 1.0) return false;
    auto frac_dist = [](double x) {
        const double f = std::abs(x - std::round(x));
        return f;
    };
    for (int i = 0; i < g.m; ++i)
        for (int j = i + 1; j < g.m; ++j)
            if (frac_dist(g.b_params[i] - g.b_params[j]) < pole_gap_tol) return false;
    // numerator a-row gammas Gamma(1 - a_i + b_j + k) must stay away from poles
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.m; ++j) {
            const double base = 1.0 - g.a_params[i] + g.b_params[j];
            if (base < 0.5 && frac_dist(base) < pole_gap_tol) return false;
        }
    return true;
}

/// Residue series over the b-row poles (small-argument expansion).
inline EvalResult meijer_g_residue(const MeijerGSpec& g, double rel_tol = 1e-13) {
    g.validate();
    if (!residue_series_applicable(g))
        throw std::invalid_argument("meijer_g_residue: series not applicable for this spec");
    const double ln_z = std::log(g.argument);

    double total = 0.0;
    double err = 0.0;
    for (int j = 0; j < g.m; ++j) {
        const double bj = g.b_params[j];
        double branch = 0.0;
        double branch_max = 0.0;
        double first_mag = -1.0;
        bool converged = false;
        for (int k = 0; k < 500; ++k) {
            double logmag = (bj + k) * ln_z - std::lgamma(k + 1.0);
            int sgn = (k % 2 == 0) ? 1 : -1;
            bool zero_term = false;
            int s;
            for (int i = 0; i < g.m; ++i) {
                if (i == j) continue;
                logmag += log_gamma_signed(g.b_params[i] - bj - k, s);
                sgn *= s;
            }
            for (int i = 0; i < g.n; ++i) {
                logmag += log_gamma_signed(1.0 - g.a_params[i] + bj + k, s);
                sgn *= s;
            }
            for (int i = g.m; i < g.q; ++i) {
                const double arg = 1.0 - g.b_params[i] + bj + k;
                if (arg <= 0.0 && arg == std::floor(arg)) { zero_term = true; break; }
                logmag -= log_gamma_signed(arg, s);
                sgn *= s;
            }
            if (!zero_term)
                for (int i = g.n; i < g.p; ++i) {
                    const double arg = g.a_params[i] - bj - k;
                    if (arg <= 0.0 && arg == std::floor(arg)) { zero_term = true; break; }
                    logmag -= log_gamma_signed(arg, s);
                    sgn *= s;
                }
            const double t = zero_term ? 0.0 : sgn * std::exp(logmag);
            branch += t;
            branch_max = std::max(branch_max, std::abs(branch));
            if (first_mag < 0.0) first_mag = std::abs(t);
            if (k > 2 && std::abs(t) <= rel_tol * std::max(std::abs(branch), first_mag)) {
                converged = true;
                err += std::abs(t) + 1e-16 * branch_max;
                break;
            }
            if (std::abs(t) > 1e6 * std::max(first_mag, 1.0) && k > 30)
                throw precision_error("meijer_g_residue: series diverging", total + branch,
                                      std::abs(t));
        }
        if (!converged)
            throw precision_error("meijer_g_residue: series did not converge", total + branch,
                                  std::abs(branch));
        total += branch;
    }
    if (!std::isfinite(total))
        throw precision_error("meijer_g_residue: non-finite result", total, HUGE_VAL);
    return {total, err, GMethod::residue_series};
}

/// General entry point.  Contour quadrature is the primary method; the
/// one-gamma case G^{1,0}_{0,1} reduces to an elementary shortcut.
inline EvalResult meijer_g(const MeijerGSpec& g, double rel_tol = 1e-10) {
    g.validate();
    if (g.m == 1 && g.n == 0 && g.p == 0 && g.q == 1) {
        const double b = g.b_params[0];
        const double v = std::pow(g.argument, b) * std::exp(-g.argument);
        return {v, std::abs(v) * 1e-15, GMethod::identity_shortcut};
    }
    return meijer_g_contour(g, rel_tol);
}

/// Precomputed contour data for one parameter set, reusable across many
/// arguments.  Construction fixes the abscissa, step and truncation so
/// that evaluation is a read-only pass over the cached gamma products;
/// arguments outside the validated range fall back to the one-shot path.
class MeijerGEvaluator {
public:
    MeijerGEvaluator(int m, int n, std::vector<double> a, std::vector<double> b,
                     double ln_z_lo = -60.0, double ln_z_hi = 15.0, double rel_tol = 1e-10)
        : m_(m), n_(n), a_(std::move(a)), b_(std::move(b)), ln_lo_(ln_z_lo), ln_hi_(ln_z_hi),
          rel_tol_(rel_tol) {
        spec_template_.m = m_;
        spec_template_.n = n_;
        spec_template_.p = static_cast<int>(a_.size());
        spec_template_.q = static_cast<int>(b_.size());
        spec_template_.a_params = a_;
        spec_template_.b_params = b_;
        spec_template_.argument = 1.0;
        spec_template_.validate();
        if (m_ < 1)
            throw std::invalid_argument("MeijerGEvaluator: requires m >= 1");

        const detail::MellinBarnesKernel kernel(spec_template_);
        // Midpoint abscissa when both pole sets exist, else just below the
        // right set (the cached grid must work across the whole z range,
        // so no per-argument saddle search here).
        if (kernel.has_left_poles()) {
            const double gap = kernel.right_pole_min() - kernel.left_pole_max();
            if (gap < 1e-6)
                throw unseparable_contour_error("MeijerGEvaluator: unseparable contour");
            sigma_ = 0.5 * (kernel.left_pole_max() + kernel.right_pole_min());
        } else {
            sigma_ = kernel.right_pole_min() - 0.5;
        }

        const double worst = std::max(std::abs(ln_lo_), std::abs(ln_hi_));
        h_ = std::min(0.125, 2.0 * pi / (10.0 * (worst + 4.0)));

        // truncation scan
        double maxlog = -std::numeric_limits<double>::infinity();
        int below = 0;
        std::vector<std::complex<double>> lw;
        for (std::size_t k = 0;; ++k) {
            const std::complex<double> w = kernel.log_w({sigma_, k * h_});
            lw.push_back(w);
            maxlog = std::max(maxlog, w.real());
            below = (w.real() < maxlog - 41.5) ? below + 1 : 0;
            if (below >= 32) break;
            if (k * h_ > 4000.0)
                throw precision_error("MeijerGEvaluator: integrand failed to decay", 0.0, HUGE_VAL);
        }
        log_w_ = std::move(lw);
        max_logw_ = maxlog;
    }

    EvalResult evaluate(double z) const {
        if (!(z > 0.0))
            throw std::invalid_argument("MeijerGEvaluator: argument must be positive");
        const double ln_z = std::log(z);
        if (ln_z < ln_lo_ || ln_z > ln_hi_) {
            MeijerGSpec s = spec_template_;
            s.argument = z;
            return meijer_g_contour(s, rel_tol_);
        }
        // scaled trapezoid at h and 2h; their difference is the error estimate
        double acc1 = 0.0, acc2 = 0.0, mag = 0.0;
        const double scale = max_logw_ + sigma_ * ln_z;
        for (std::size_t k = 0; k < log_w_.size(); ++k) {
            const std::complex<double>& lwk = log_w_[k];
            const double re = lwk.real() + sigma_ * ln_z - scale;
            const double im = lwk.imag() + (k * h_) * ln_z;
            const double t = std::exp(re) * std::cos(im);
            const double wgt = (k == 0) ? 0.5 : 1.0;
            acc1 += wgt * t;
            mag += wgt * std::exp(re);
            if (k % 2 == 0) acc2 += ((k == 0) ? 0.5 : 1.0) * t;
        }
        const double amp = std::exp(scale) * h_ / pi;
        const double v1 = amp * acc1;
        const double v2 = 2.0 * amp * acc2;
        const double noise = amp * mag * 1e-15;
        const double err = std::abs(v1 - v2) + noise;
        if (!std::isfinite(v1))
            throw precision_error("MeijerGEvaluator: non-finite result", v1, err);
        if (std::abs(v1 - v2) > 1e3 * std::max(rel_tol_ * std::abs(v1), noise)) {
            MeijerGSpec s = spec_template_;
            s.argument = z;
            return meijer_g_contour(s, rel_tol_);
        }
        return {v1, err, GMethod::contour_quadrature};
    }

    double sigma() const { return sigma_; }
    std::size_t node_count() const { return log_w_.size(); }

private:
    int m_, n_;
    std::vector<double> a_, b_;
    double ln_lo_, ln_hi_, rel_tol_;
    MeijerGSpec spec_template_;
    double sigma_ = 0.0;
    double h_ = 0.0;
    double max_logw_ = 0.0;
    std::vector<std::complex<double>> log_w_;
};

} // namespace rfso
