#include <doctest.h>

#include <rfso/meijer_g.hpp>
#include <rfso/quadrature.hpp>
#include <rfso/special_functions.hpp>

#include <cmath>

using namespace rfso;

namespace {

MeijerGSpec make_spec(int m, int n, std::vector<double> a, std::vector<double> b, double z) {
    MeijerGSpec s;
    s.m = m;
    s.n = n;
    s.p = static_cast<int>(a.size());
    s.q = static_cast<int>(b.size());
    s.a_params = std::move(a);
    s.b_params = std::move(b);
    s.argument = z;
    return s;
}

// The unified FSO CDF parameter rows for r = 1 (heterodyne detection).
MeijerGSpec cdf_spec_r1(double xi2, double a, double b, double z) {
    return make_spec(3, 1, {1.0, xi2 + 1.0}, {xi2, a, b, 0.0}, z);
}

} // namespace

TEST_SUITE("meijer_g") {

TEST_CASE("exp identity: G^{1,0}_{0,1}[z | -; 0] = exp(-z)") {
    for (double z : {0.1, 0.36787944117, 1.0, 2.5, 7.0}) {
        auto spec = make_spec(1, 0, {}, {0.0}, z);
        const auto shortcut = meijer_g(spec);
        CHECK(shortcut.method_used == GMethod::identity_shortcut);
        CHECK(shortcut.value == doctest::Approx(std::exp(-z)).epsilon(1e-12));
        const auto contour = meijer_g_contour(spec);
        CHECK(contour.value == doctest::Approx(std::exp(-z)).epsilon(1e-11));
        CHECK(std::abs(contour.value - std::exp(-z)) <= 10.0 * contour.abs_error_estimate + 1e-14);
        const auto residue = meijer_g_residue(spec);
        CHECK(residue.value == doctest::Approx(std::exp(-z)).epsilon(1e-12));
    }
    auto spec1 = make_spec(1, 0, {}, {0.0}, 1.0);
    CHECK(meijer_g(spec1).value == doctest::Approx(0.36787944117144233).epsilon(1e-12));
}

TEST_CASE("lower incomplete gamma identity: Upsilon(a,z) = G^{1,1}_{1,2}[z | 1; a, 0]") {
    auto spec = make_spec(1, 1, {1.0}, {1.0, 0.0}, 1.0);
    const auto r = meijer_g(spec);
    CHECK(r.value == doctest::Approx(0.63212055882855768).epsilon(1e-11));
    CHECK(r.value == doctest::Approx(lower_incomplete_gamma(1.0, 1.0)).epsilon(1e-11));

    for (double a : {0.7, 1.6, 3.2})
        for (double z : {0.2, 1.0, 4.5}) {
            auto s = make_spec(1, 1, {1.0}, {a, 0.0}, z);
            const auto rc = meijer_g_contour(s);
            CHECK(rc.value == doctest::Approx(lower_incomplete_gamma(a, z)).epsilon(1e-10));
        }
}

TEST_CASE("binomial identity: (1+z)^{-a} = G^{1,1}_{1,1}[z | 1-a; 0] / Gamma(a)") {
    for (double a : {0.7, 2.3})
        for (double z : {0.2, 0.7, 3.0}) {
            auto s = make_spec(1, 1, {1.0 - a}, {0.0}, z);
            const auto rc = meijer_g_contour(s);
            const double expect = std::pow(1.0 + z, -a) * gamma_fn(a);
            CHECK(rc.value == doctest::Approx(expect).epsilon(1e-10));
            CHECK(std::abs(rc.value - expect) <= 10.0 * rc.abs_error_estimate + 1e-13 * expect);
            if (z < 1.0) {
                const auto rr = meijer_g_residue(s);
                CHECK(rr.value == doctest::Approx(expect).epsilon(1e-10));
            }
        }
}

TEST_CASE("Bessel identity: K_nu(2 sqrt(z)) = G^{2,0}_{0,2}[z | -; nu/2, -nu/2] / 2") {
    for (double nu : {0.392, 1.0, 2.0})
        for (double z : {0.25, 1.0, 4.0}) {
            auto s = make_spec(2, 0, {}, {nu / 2.0, -nu / 2.0}, z);
            const auto rc = meijer_g_contour(s);
            const double expect = 2.0 * bessel_k(nu, 2.0 * std::sqrt(z));
            CHECK(rc.value == doctest::Approx(expect).epsilon(1e-9));
        }
}

TEST_CASE("contour and residue methods agree within combined error estimates") {
    // FSO CDF-class parameter rows (r = 1, weak turbulence, xi = 1.1)
    const double xi2 = 1.21, af = 2.902, bf = 2.51;
    for (double z : {0.01, 0.2, 0.9, 3.0}) {
        auto s = cdf_spec_r1(xi2, af, bf, z);
        const auto rc = meijer_g_contour(s);
        const auto rr = meijer_g_residue(s);
        CHECK(std::abs(rc.value - rr.value) <=
              rc.abs_error_estimate + rr.abs_error_estimate + 1e-13 * std::abs(rc.value));
    }
    // strong turbulence pair
    for (double z : {0.05, 0.7}) {
        auto s = cdf_spec_r1(1.21, 2.064, 1.342, z);
        const auto rc = meijer_g_contour(s);
        const auto rr = meijer_g_residue(s);
        CHECK(std::abs(rc.value - rr.value) <=
              rc.abs_error_estimate + rr.abs_error_estimate + 1e-13 * std::abs(rc.value));
    }
}

TEST_CASE("monotonic refinement: halving the step does not degrade the error estimate") {
    auto s = cdf_spec_r1(1.21, 2.902, 2.51, 0.8);
    double h = 0.05;
    auto prev = meijer_g_contour(s, 1e-10, h);
    for (int i = 0; i < 4; ++i) {
        h *= 0.5;
        const auto next = meijer_g_contour(s, 1e-10, h);
        const double noise_floor = 1e-14 * std::abs(next.value) + 1e-300;
        CHECK(next.abs_error_estimate <= prev.abs_error_estimate + 10.0 * noise_floor);
        prev = next;
    }
}

TEST_CASE("unseparable contour fails loudly") {
    // b-row pole at 0 in the m-group collides with the a-row pole set of a = 1
    auto s = make_spec(1, 1, {1.0}, {0.0}, 0.5);
    CHECK_THROWS_AS(meijer_g_contour(s), unseparable_contour_error);
}

TEST_CASE("invalid specs are rejected") {
    auto s = make_spec(2, 0, {}, {0.5}, 1.0); // m > q
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    auto s2 = make_spec(1, 0, {}, {0.0}, -1.0);
    CHECK_THROWS_AS(s2.validate(), std::invalid_argument);
    auto s3 = make_spec(1, 0, {}, {0.0}, 1.0);
    s3.b_params.push_back(2.0); // size mismatch
    CHECK_THROWS_AS(s3.validate(), std::invalid_argument);
}

TEST_CASE("cached evaluator matches the one-shot path across the argument range") {
    const double xi2 = 1.21, af = 2.902, bf = 2.51;
    MeijerGEvaluator eval(3, 1, {1.0, xi2 + 1.0}, {xi2, af, bf, 0.0}, -40.0, 8.0);
    for (double z : {1e-15, 1e-6, 1e-3, 0.1, 1.0, 10.0, 900.0}) {
        auto s = cdf_spec_r1(xi2, af, bf, z);
        const auto one_shot = meijer_g_contour(s);
        const auto cached = eval.evaluate(z);
        CHECK(std::abs(cached.value - one_shot.value) <=
              10.0 * (cached.abs_error_estimate + one_shot.abs_error_estimate) +
                  1e-13 * std::abs(one_shot.value) + 1e-300);
    }
}

TEST_CASE("residue series agrees with quadrature of the PDF kernel") {
    // G^{3,0}_{1,3}[z | xi^2+1; xi^2, a, b]: check the Mellin identity
    // int_0^inf z^{-1} G dz against the analytic value Gamma-product at s=0:
    // M[G](s) at s = 0 equals Gamma(xi2)Gamma(a)Gamma(b)/Gamma(xi2+1).
    const double xi2 = 1.21, af = 2.902, bf = 2.51;
    auto kernel = [&](double z) {
        auto s = make_spec(3, 0, {xi2 + 1.0}, {xi2, af, bf}, z);
        return meijer_g_contour(s).value;
    };
    const double quad = integrate([&](double z) { return kernel(z) / z; }, 1e-9, 1.0, 1e-11, 1e-11)
                            .value +
                        integrate_to_infinity([&](double z) { return kernel(z) / z; }, 1.0, 1e-11,
                                              1e-11)
                            .value;
    const double expect = gamma_fn(xi2) * gamma_fn(af) * gamma_fn(bf) / gamma_fn(xi2 + 1.0);
    CHECK(quad == doctest::Approx(expect).epsilon(1e-7));
}

} // TEST_SUITE
