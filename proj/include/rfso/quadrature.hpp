#pragma once

// Adaptive 15-point Gauss-Kronrod quadrature on finite intervals.
// Worst-interval-first refinement with a global error budget.

#include "special_functions.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace rfso {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
};

namespace detail {

inline constexpr double gk15_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <class F>
inline void gk15(F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(c);
    double k = gk15_wk[7] * fc;
    double g = gk15_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = hl * gk15_nodes[i];
        const double s = f(c + dx) + f(c - dx);
        k += gk15_wk[i] * s;
        if (i % 2 == 1) g += gk15_wg[i / 2] * s;
    }
    value = k * hl;
    const double diff = 200.0 * std::abs(k - g) * std::abs(hl);
    err = diff * std::sqrt(diff);
    if (!std::isfinite(err)) err = std::abs(diff);
}

struct QuadSegment {
    double a, b, value, err;
    bool operator<(const QuadSegment& o) const { return err < o.err; }
};

} // namespace detail

/// Integrate f over [a, b] to the requested tolerance.  Throws
/// precision_error carrying the best value if the budget is exhausted.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10, double rel_tol = 1e-10,
                     int max_intervals = 4000) {
    QuadResult r;
    if (a == b) return r;
    std::priority_queue<detail::QuadSegment> segs;
    double v, e;
    detail::gk15(f, a, b, v, e);
    r.evaluations = 15;
    segs.push({a, b, v, e});
    double total = v, total_err = e;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(segs.size()) >= max_intervals)
            throw precision_error("integrate: tolerance not reached", total, total_err);
        const detail::QuadSegment s = segs.top();
        segs.pop();
        const double mid = 0.5 * (s.a + s.b);
        double v1, e1, v2, e2;
        detail::gk15(f, s.a, mid, v1, e1);
        detail::gk15(f, mid, s.b, v2, e2);
        r.evaluations += 30;
        total += v1 + v2 - s.value;
        total_err += e1 + e2 - s.err;
        segs.push({s.a, mid, v1, e1});
        segs.push({mid, s.b, v2, e2});
        if (total_err < 0.0) total_err = std::abs(total_err);
    }
    r.value = total;
    r.abs_error = total_err;
    return r;
}

/// Integrate f over [a, inf) by expanding doublings of the interval
/// until the increments fall below tolerance.  Intended for integrands
/// with (super)exponential tails.
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, double abs_tol = 1e-10, double rel_tol = 1e-10,
                                 int max_intervals = 4000) {
    QuadResult total;
    double lo = a;
    double width = std::max(1.0, std::abs(a));
    double best = 0.0;
    for (int k = 0; k < 60; ++k) {
        QuadResult piece = integrate(f, lo, lo + width, abs_tol * 0.25, rel_tol * 0.25, max_intervals);
        total.value += piece.value;
        total.abs_error += piece.abs_error;
        total.evaluations += piece.evaluations;
        best = std::max(best, std::abs(total.value));
        lo += width;
        width *= 2.0;
        if (std::abs(piece.value) <= std::max(abs_tol, rel_tol * best) && k > 2) return total;
    }
    throw precision_error("integrate_to_infinity: tail did not converge", total.value,
                          total.abs_error);
}

} // namespace rfso
