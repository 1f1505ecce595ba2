#pragma once

// System parameters and channel statistics: the unified Gamma-Gamma
// FSO hop with pointing errors (PDF/CDF through Meijer G), the
// Nakagami-m MRC RF hops (Gamma SNR), samplers for all three, and the
// decode-and-forward equivalent SNRs.  Everything is held in linear
// scale; dB conversions belong to the CLI layer.

#include "meijer_g.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rfso {

struct FsoLinkParams {
    double a = 0.0;       // Gamma-Gamma fading parameter
    double b = 0.0;       // Gamma-Gamma fading parameter
    double xi = 0.0;      // pointing error severity (larger = more accurate)
    int r = 1;            // detection: 1 heterodyne, 2 IM/DD
    double omega_sr = 0.0; // electrical SNR, linear

    void validate() const {
        if (!(a > 0.0) || !(b > 0.0) || !(xi > 0.0) || !(omega_sr > 0.0))
            throw std::invalid_argument("FsoLinkParams: a, b, xi, omega_sr must be positive");
        if (r != 1 && r != 2)
            throw std::invalid_argument("FsoLinkParams: r must be 1 (HD) or 2 (IM/DD)");
    }
};

/// Delta(k, x) = x/k, (x+1)/k, ..., (x+k-1)/k.
inline std::vector<double> delta_expansion(int k, double x) {
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i) out[i] = (x + i) / k;
    return out;
}

struct FsoDerived {
    double A = 0.0;   // PDF front factor
    double B = 0.0;   // PDF kernel scale
    double I = 0.0;   // CDF front factor
    double rho = 0.0; // CDF kernel scale
    double h = 0.0;   // xi^2 / (xi^2 + 1)
    double Xi = 0.0;  // r^{a+b-1} / (2 pi)^{r-1}
    std::vector<double> k1; // Delta(r, xi^2 + 1), r entries
    std::vector<double> k2; // [Delta(r, xi^2), Delta(r, a), Delta(r, b)], 3r entries
};

inline FsoDerived derive_fso(const FsoLinkParams& p) {
    p.validate();
    FsoDerived d;
    const double xi2 = p.xi * p.xi;
    d.h = xi2 / (xi2 + 1.0);
    d.A = xi2 / (p.r * gamma_fn(p.a) * gamma_fn(p.b));
    d.B = d.h * p.a * p.b / std::pow(p.omega_sr, 1.0 / p.r);
    d.I = xi2 * std::pow(static_cast<double>(p.r), p.a + p.b - 2.0) /
          (std::pow(2.0 * pi, p.r - 1.0) * gamma_fn(p.a) * gamma_fn(p.b));
    d.rho = std::pow(d.h * p.a * p.b, p.r) / (p.omega_sr * std::pow(p.r, 2.0 * p.r));
    d.Xi = std::pow(static_cast<double>(p.r), p.a + p.b - 1.0) / std::pow(2.0 * pi, p.r - 1.0);
    d.k1 = delta_expansion(p.r, xi2 + 1.0);
    d.k2 = delta_expansion(p.r, xi2);
    const auto ka = delta_expansion(p.r, p.a);
    const auto kb = delta_expansion(p.r, p.b);
    d.k2.insert(d.k2.end(), ka.begin(), ka.end());
    d.k2.insert(d.k2.end(), kb.begin(), kb.end());
    return d;
}

/// FSO hop statistics.  Immutable after construction; evaluation is
/// read-only and safe from concurrent threads.
class FsoChannel {
public:
    explicit FsoChannel(FsoLinkParams p)
        : p_(p), d_(derive_fso(p)),
          pdf_eval_(3, 0, {p.xi * p.xi + 1.0}, {p.xi * p.xi, p.a, p.b}, -70.0, 4.5),
          cdf_eval_(make_cdf_eval(p, d_)) {}

    const FsoLinkParams& params() const { return p_; }
    const FsoDerived& derived() const { return d_; }

    /// Meijer kernel G^{3,0}_{1,3}[w | xi^2+1; xi^2, a, b].
    double kernel(double w) const {
        if (w <= 0.0) return 0.0;
        if (std::log(w) < -70.0) return 0.0;
        return pdf_eval_.evaluate(w).value;
    }

    /// Density of gamma_SR.
    double pdf(double gamma) const {
        if (!(gamma > 0.0)) return 0.0;
        const double w = d_.B * std::pow(gamma, 1.0 / p_.r);
        return d_.A / gamma * kernel(w);
    }

    /// Distribution function of gamma_SR, clamped to [0, 1].
    double cdf(double gamma) const {
        if (!(gamma > 0.0)) return 0.0;
        const double z = d_.rho * gamma;
        if (std::log(z) < -70.0) return 0.0;
        const double v = d_.I * cdf_eval_.evaluate(z).value;
        return std::clamp(v, 0.0, 1.0);
    }

    /// Upper tail 1 - F computed by integrating the density; accurate
    /// in absolute terms deep into the tail where the CDF saturates.
    double tail(double gamma) const {
        if (!(gamma > 0.0)) return 1.0;
        return integrate_to_infinity([this](double x) { return pdf(x); }, gamma, 1e-14, 1e-12)
            .value;
    }

private:
    static MeijerGEvaluator make_cdf_eval(const FsoLinkParams& p, const FsoDerived& d) {
        std::vector<double> a_row{1.0};
        a_row.insert(a_row.end(), d.k1.begin(), d.k1.end());
        std::vector<double> b_row = d.k2;
        b_row.push_back(0.0);
        return MeijerGEvaluator(3 * p.r, 1, std::move(a_row), std::move(b_row), -70.0, 16.0);
    }

    FsoLinkParams p_;
    FsoDerived d_;
    MeijerGEvaluator pdf_eval_;
    MeijerGEvaluator cdf_eval_;
};

struct RfLinkParams {
    int m = 1;           // Nakagami fading parameter (integer)
    int n_antennas = 1;  // MRC branches
    double alpha = 1.0;  // power-splitting ratio for information decoding
    double d = 1.0;      // distance
    double eta = 0.0;    // path-loss exponent
    double lc = 1.0;     // propagation loss constant
    double pt = 1.0;     // transmit power, linear
    double n0 = 1.0;     // AWGN variance
    double sigma2 = 1.0; // signal-processing noise variance
    double omega = 1.0;  // average channel power gain, linear

    void validate() const {
        if (m < 1 || n_antennas < 1)
            throw std::invalid_argument("RfLinkParams: m and n_antennas must be >= 1");
        if (!(alpha > 0.0) || alpha > 1.0)
            throw std::invalid_argument("RfLinkParams: alpha must be in (0, 1]");
        if (!(d > 0.0) || eta < 0.0 || !(lc > 0.0) || !(pt > 0.0) || !(n0 > 0.0) ||
            !(sigma2 > 0.0) || !(omega > 0.0))
            throw std::invalid_argument("RfLinkParams: positivity constraints violated");
    }
};

struct RfDerived {
    double lambda = 0.0; // Gamma rate of the MRC SNR
    int tau = 0;         // Gamma shape, m * N
    double phi = 0.0;    // lambda * omega, the high-SNR constant
};

inline RfDerived derive_rf(const RfLinkParams& p) {
    p.validate();
    RfDerived d;
    d.tau = p.m * p.n_antennas;
    d.phi = p.m * std::pow(p.d, p.eta) * (p.alpha * p.n0 + p.sigma2) / (p.alpha * p.pt * p.lc);
    d.lambda = d.phi / p.omega;
    return d;
}

/// Gamma(tau, rate lambda) density of the MRC SNR.
inline double rf_pdf(const RfDerived& d, double gamma) {
    if (!(gamma > 0.0)) return 0.0;
    return std::exp(d.tau * std::log(d.lambda) + (d.tau - 1.0) * std::log(gamma) -
                    d.lambda * gamma - std::lgamma(static_cast<double>(d.tau)));
}

/// CDF of the MRC SNR, the regularized incomplete gamma P(tau, lambda x).
inline double rf_cdf(const RfDerived& d, double gamma) {
    if (!(gamma > 0.0)) return 0.0;
    return gamma_p(static_cast<double>(d.tau), d.lambda * gamma);
}

/// Erlang finite-sum form of the same CDF, 1 - e^{-lx} sum (lx)^p/p!.
/// Kept as the independent algebraic route for consistency tests.
inline double rf_cdf_erlang(const RfDerived& d, double gamma) {
    if (!(gamma > 0.0)) return 0.0;
    const double lx = d.lambda * gamma;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < d.tau; ++k) {
        term *= lx / k;
        sum += term;
    }
    return 1.0 - std::exp(-lx) * sum;
}

/// Complement 1 - F computed without cancellation.
inline double rf_tail(const RfDerived& d, double gamma) {
    if (!(gamma > 0.0)) return 1.0;
    return gamma_q(static_cast<double>(d.tau), d.lambda * gamma);
}

/// Draw from Gamma(tau, rate lambda) as a sum of tau unit exponentials.
inline double sample_rf(const RfDerived& d, RandomStream& rng) {
    double acc = 0.0;
    for (int i = 0; i < d.tau; ++i) acc += rng.exponential();
    return acc / d.lambda;
}

struct SystemScenario {
    FsoLinkParams fso;
    RfLinkParams rf_d;
    RfLinkParams rf_e;
    double rs = 0.0;     // target secrecy rate, nats
    double varphi = 1.0; // omega_sr = varphi * omega_rd along asymptotic sweeps

    double theta() const { return std::exp(rs); }

    void validate() const {
        fso.validate();
        rf_d.validate();
        rf_e.validate();
        if (rs < 0.0) throw std::invalid_argument("SystemScenario: rs must be >= 0");
        if (!(varphi > 0.0)) throw std::invalid_argument("SystemScenario: varphi must be > 0");
    }
};

/// DF relaying equivalent SNRs: (min(sr, rd), min(sr, re)).
inline std::pair<double, double> equivalent_snrs(double gamma_sr, double gamma_rd,
                                                 double gamma_re) {
    return {std::min(gamma_sr, gamma_rd), std::min(gamma_sr, gamma_re)};
}

/// Inverse-CDF sampler for gamma_SR backed by a monotone cubic table
/// over a log-gamma grid, refined until the interpolation error in u is
/// below 1e-10.  Construction does all the work; sampling is read-only.
class FsoSampler {
public:
    explicit FsoSampler(const FsoChannel& ch, std::size_t base_knots = 4096)
        : channel_(&ch) {
        build(base_knots);
    }

    double sample(RandomStream& rng) const { return invert(rng.uniform()); }

    /// Solve F(gamma) = u.
    double invert(double u) const {
        if (!(u > 0.0) || !(u < 1.0))
            throw std::domain_error("FsoSampler: u must lie strictly inside (0,1)");
        if (u < f_.front() || u > f_.back()) return invert_slow(u);
        std::size_t lo = 0, hi = f_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (f_[mid] <= u ? lo : hi) = mid;
        }
        return std::exp(segment_invert(lo, u));
    }

    std::size_t knot_count() const { return f_.size(); }

private:
    // Monotone (Fritsch-Carlson) cubic value on segment j at local s in [0,1].
    double segment_value(std::size_t j, double s) const {
        const double dx = x_[j + 1] - x_[j];
        const double d0 = slope_[j] * dx, d1 = slope_[j + 1] * dx;
        const double df = f_[j + 1] - f_[j];
        const double s2 = s * s, s3 = s2 * s;
        return f_[j] + d0 * s + (3.0 * df - 2.0 * d0 - d1) * s2 + (d0 + d1 - 2.0 * df) * s3;
    }

    double segment_invert(std::size_t j, double u) const {
        double s = 0.5;
        const double df = f_[j + 1] - f_[j];
        if (df > 0.0) s = std::clamp((u - f_[j]) / df, 0.0, 1.0);
        for (int it = 0; it < 60; ++it) {
            const double v = segment_value(j, s) - u;
            const double dx = x_[j + 1] - x_[j];
            const double d0 = slope_[j] * dx, d1 = slope_[j + 1] * dx;
            const double dfv = f_[j + 1] - f_[j];
            const double deriv = d0 + 2.0 * (3.0 * dfv - 2.0 * d0 - d1) * s +
                                 3.0 * (d0 + d1 - 2.0 * dfv) * s * s;
            if (deriv <= 0.0) break;
            const double step = v / deriv;
            s = std::clamp(s - step, 0.0, 1.0);
            if (std::abs(step) < 1e-14) break;
        }
        return x_[j] + s * (x_[j + 1] - x_[j]);
    }

    double invert_slow(double u) const {
        // expanding bracket on the true CDF, then bisection to 1e-12 in u
        double lo = 0.0, hi = std::exp(x_.back());
        if (u >= f_.back()) {
            while (channel_->cdf(hi) < u) {
                hi *= 2.0;
                if (hi > 1e300) return hi;
            }
            lo = std::exp(x_.back());
        } else {
            hi = std::exp(x_.front());
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double v = channel_->cdf(mid);
            (v < u ? lo : hi) = mid;
            if (std::abs(v - u) < 1e-12) return mid;
        }
        return 0.5 * (lo + hi);
    }

    void build(std::size_t base_knots) {
        const FsoChannel& ch = *channel_;
        const double scale = ch.params().omega_sr;
        double glo = scale * 1e-9;
        for (int i = 0; i < 200 && ch.cdf(glo) > 1e-11; ++i) glo *= 0.25;
        double ghi = scale * 4.0;
        for (int i = 0; i < 300 && ch.tail(ghi) > 1e-11; ++i) ghi *= 1.5;

        x_.resize(base_knots);
        const double xlo = std::log(glo), xhi = std::log(ghi);
        for (std::size_t i = 0; i < base_knots; ++i)
            x_[i] = xlo + (xhi - xlo) * static_cast<double>(i) / (base_knots - 1);
        f_.resize(base_knots);
        for (std::size_t i = 0; i < base_knots; ++i) f_[i] = ch.cdf(std::exp(x_[i]));
        for (std::size_t i = 1; i < base_knots; ++i) f_[i] = std::max(f_[i], f_[i - 1]);

        // refine segments until the midpoint interpolation error is small
        for (int pass = 0; pass < 6; ++pass) {
            compute_slopes();
            std::vector<double> nx, nf;
            nx.reserve(x_.size() * 2);
            nf.reserve(x_.size() * 2);
            bool refined = false;
            for (std::size_t j = 0; j + 1 < x_.size(); ++j) {
                nx.push_back(x_[j]);
                nf.push_back(f_[j]);
                if (f_[j + 1] - f_[j] < 1e-13) continue;
                const double xm = 0.5 * (x_[j] + x_[j + 1]);
                const double fm = ch.cdf(std::exp(xm));
                if (std::abs(segment_value(j, 0.5) - fm) > 1e-10) {
                    nx.push_back(xm);
                    nf.push_back(std::clamp(fm, f_[j], f_[j + 1]));
                    refined = true;
                }
            }
            nx.push_back(x_.back());
            nf.push_back(f_.back());
            x_.swap(nx);
            f_.swap(nf);
            if (!refined) break;
        }
        compute_slopes();
    }

    void compute_slopes() {
        const std::size_t n = x_.size();
        slope_.assign(n, 0.0);
        std::vector<double> sec(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j)
            sec[j] = (f_[j + 1] - f_[j]) / (x_[j + 1] - x_[j]);
        slope_[0] = sec.front();
        slope_[n - 1] = sec.back();
        for (std::size_t j = 1; j + 1 < n; ++j) {
            if (sec[j - 1] * sec[j] <= 0.0)
                slope_[j] = 0.0;
            else
                slope_[j] = 2.0 * sec[j - 1] * sec[j] / (sec[j - 1] + sec[j]); // harmonic mean
        }
    }

    const FsoChannel* channel_;
    std::vector<double> x_;     // log-gamma knots
    std::vector<double> f_;     // CDF values
    std::vector<double> slope_; // monotone derivative estimates dF/dx
};

/// Physical composition sampler: gamma = omega * (Xa * Xb * U^{1/xi^2} / h)^r
/// with Xa ~ Gamma(a, 1/a), Xb ~ Gamma(b, 1/b).  Exists as an
/// independent distributional cross-check of the inverse-CDF sampler;
/// non-integer Gamma shapes are drawn by Marsaglia-Tsang.
inline double sample_fso_physical(const FsoLinkParams& p, RandomStream& rng) {
    auto gamma_draw = [&rng](double shape) {
        // Marsaglia-Tsang squeeze, shape >= 1 after boosting
        const bool boost = shape < 1.0;
        const double d = (boost ? shape + 1.0 : shape) - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            // normal via Box-Muller on counter-based uniforms
            const double u1 = rng.uniform(), u2 = rng.uniform();
            const double x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
            const double v = (1.0 + c * x) * (1.0 + c * x) * (1.0 + c * x);
            if (v <= 0.0) continue;
            const double u = rng.uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
                double g = d * v;
                if (boost) g *= std::pow(rng.uniform(), 1.0 / shape);
                return g;
            }
        }
    };
    const double xa = gamma_draw(p.a) / p.a;
    const double xb = gamma_draw(p.b) / p.b;
    const double up = std::pow(rng.uniform(), 1.0 / (p.xi * p.xi));
    const double h = p.xi * p.xi / (p.xi * p.xi + 1.0);
    return p.omega_sr * std::pow(xa * xb * up / h, static_cast<double>(p.r));
}

} // namespace rfso
