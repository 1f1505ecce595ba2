#pragma once

// Gamma-family special functions used throughout the library: real and
// complex log-gamma, regularized incomplete gammas, and the modified
// Bessel function of the second kind (validation helper).

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace rfso {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

/// Thrown when an iterative scheme stops before reaching its target
/// precision.  Carries the best value reached and its error estimate.
class precision_error : public std::runtime_error {
public:
    precision_error(const std::string& what, double best, double err)
        : std::runtime_error(what), best_value(best), error_estimate(err) {}
    double best_value;
    double error_estimate;
};

namespace detail {

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
// Relative accuracy ~1e-15 for Re(z) >= 0.5.
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

inline std::complex<double> lanczos_sum(std::complex<double> z) {
    std::complex<double> s(lanczos_c[0], 0.0);
    for (int k = 1; k < 15; ++k)
        s += lanczos_c[k] / (z + std::complex<double>(k - 1, 0.0));
    return s;
}

// log(sin(pi z)) up to an irrelevant multiple of 2*pi*i.  Stable for
// large |Im z| where std::sin overflows.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
    const double y = z.imag();
    if (std::abs(y) < 10.0)
        return std::log(std::sin(pi * z));
    if (y > 0.0) {
        // sin(pi z) = -exp(-i pi z) (1 - exp(2 i pi z)) / (2 i)
        const std::complex<double> i(0.0, 1.0);
        return -i * pi * z + std::log(1.0 - std::exp(2.0 * i * pi * z))
               + std::complex<double>(-std::log(2.0), 0.5 * pi);
    }
    return std::conj(log_sin_pi(std::conj(z)));
}

} // namespace detail

/// Complex log-gamma.  The imaginary part is not branch-corrected; the
/// result is meant to be exponentiated (possibly after summing several
/// such terms), for which the branch is irrelevant.
inline std::complex<double> log_gamma(std::complex<double> z) {
    if (z.real() < 0.5) {
        // reflection formula
        return std::log(pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
    }
    const std::complex<double> t = z + (detail::lanczos_g - 0.5);
    return 0.91893853320467274178 /* log(sqrt(2 pi)) */
           + (z - 0.5) * std::log(t) - t + std::log(detail::lanczos_sum(z));
}

/// Real log|Gamma(x)| together with the sign of Gamma(x).
/// Valid for any non-pole real x.
inline double log_gamma_signed(double x, int& sign) {
    if (x > 0.0) {
        sign = 1;
        return std::lgamma(x);
    }
    if (x == std::floor(x))
        throw std::domain_error("log_gamma_signed: pole at non-positive integer");
    // Gamma alternates sign on the negative axis: negative on (-1,0),
    // positive on (-2,-1), ...
    const double k = std::floor(-x);
    sign = (static_cast<long long>(k) % 2 == 0) ? -1 : 1;
    const double refl = std::log(pi / std::abs(std::sin(pi * x))) - std::lgamma(1.0 - x);
    return refl;
}

/// Gamma function on the positive half-line.
inline double gamma_fn(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_fn: requires x > 0");
    return std::tgamma(x);
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by its power series.
// Converges well for x < a + 1.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw precision_error("gamma_p_series: no convergence",
                          sum * std::exp(-x + a * std::log(x) - std::lgamma(a)), 1e-10);
}

// Regularized upper incomplete gamma Q(a,x) by continued fraction
// (modified Lentz).  Converges well for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw precision_error("gamma_q_cf: no convergence",
                          std::exp(-x + a * std::log(x) - std::lgamma(a)) * h, 1e-10);
}

} // namespace detail

/// Regularized lower incomplete gamma P(a, x) = gamma(a,x) / Gamma(a).
inline double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::domain_error("gamma_p: requires a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_cf(a, x);
}

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x) / Gamma(a).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0)
        throw std::domain_error("gamma_q: requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

/// Lower incomplete gamma function (non-regularized), monotone
/// non-decreasing in x.
inline double lower_incomplete_gamma(double a, double x) {
    return gamma_p(a, x) * gamma_fn(a);
}

/// Upper incomplete gamma function.  Complementarity with the lower
/// one is exact up to rounding: both derive from the same P(a,x).
inline double upper_incomplete_gamma(double a, double x) {
    return gamma_q(a, x) * gamma_fn(a);
}

namespace detail {

// 1/Gamma(1+t) = 1 + g1 t + g2 t^2 + g3 t^3 + ...
inline constexpr double inv_gamma1p_c3 =
    -0.04200263503409523553; // euler^3/6 - euler*pi^2/12 + zeta(3)/3

// Temme's auxiliary coefficients for the small-x Bessel-K series.
inline void temme_gammas(double mu, double& g1, double& g2) {
    if (std::abs(mu) > 1e-4) {
        g1 = (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
        g2 = (1.0 / std::tgamma(1.0 - mu) + 1.0 / std::tgamma(1.0 + mu)) / 2.0;
    } else {
        g1 = -euler_gamma - inv_gamma1p_c3 * mu * mu;
        g2 = 1.0 / std::tgamma(1.0 + mu); // ~1 + O(mu)
        g2 = (g2 + 1.0 / std::tgamma(1.0 - mu)) / 2.0;
    }
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x <= 2, by Temme's series.
inline void bessel_k_temme(double mu, double x, double& kmu, double& kmu1) {
    const double eps = 1e-16;
    const double x2 = 0.5 * x;
    const double d = -std::log(x2);
    const double e = mu * d;
    const double pimu = pi * mu;
    const double fact = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
    const double fact2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
    double g1, g2;
    temme_gammas(mu, g1, g2);
    double f = fact * (g1 * std::cosh(e) + g2 * fact2 * d);
    double p = 0.5 * std::exp(e) * std::tgamma(1.0 + mu);
    double q = 0.5 * std::exp(-e) * std::tgamma(1.0 - mu);
    const double xmu2 = mu * mu;
    const double cx = x2 * x2;
    double c = 1.0;
    double sum = f;
    double sum1 = p;
    for (int i = 1; i <= 500; ++i) {
        f = (i * f + p + q) / (i * i - xmu2);
        c *= cx / i;
        p /= (i - mu);
        q /= (i + mu);
        const double del = c * f;
        sum += del;
        const double del1 = c * (p - i * f);
        sum1 += del1;
        if (std::abs(del) < std::abs(sum) * eps) {
            kmu = sum;
            kmu1 = sum1 * (2.0 / x);
            return;
        }
    }
    throw precision_error("bessel_k_temme: no convergence", sum, 1e-10);
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x > 2, by Steed's CF2.
inline void bessel_k_cf2(double mu, double x, double& kmu, double& kmu1) {
    const double eps = 1e-16;
    const double xmu2 = mu * mu;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 1000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < eps) {
            h = a1 * h;
            kmu = std::sqrt(pi / (2.0 * x)) * std::exp(-x) / s;
            kmu1 = kmu * (mu + x + 0.5 - h) / x;
            return;
        }
    }
    throw precision_error("bessel_k_cf2: no convergence", 0.0, 1e-10);
}

} // namespace detail

/// Modified Bessel function of the second kind, K_nu(x), real order.
inline double bessel_k(double nu, double x) {
    if (!(x > 0.0))
        throw std::domain_error("bessel_k: requires x > 0");
    nu = std::abs(nu); // K is even in the order
    const int nl = static_cast<int>(nu + 0.5);
    const double mu = nu - nl; // |mu| <= 1/2
    double kmu, kmu1;
    if (x <= 2.0)
        detail::bessel_k_temme(mu, x, kmu, kmu1);
    else
        detail::bessel_k_cf2(mu, x, kmu, kmu1);
    // upward recurrence in the order
    double km = kmu, k0 = kmu1;
    double ord = mu + 1.0;
    for (int i = 1; i < nl; ++i) {
        const double kp = km + (2.0 * ord / x) * k0;
        km = k0;
        k0 = kp;
        ord += 1.0;
    }
    return (nl == 0) ? kmu : k0;
}

} // namespace rfso
