#include <doctest.h>

#include <rfso/channel_model.hpp>
#include <rfso/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace rfso;

namespace {

FsoLinkParams fig2_fso(double omega_sr = 1.0, int r = 1) {
    FsoLinkParams p;
    p.a = 2.902;
    p.b = 2.51;
    p.xi = 1.1;
    p.r = r;
    p.omega_sr = omega_sr;
    return p;
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
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

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                                 static_cast<double>(j) / b.size()));
    }
    return d;
}

} // namespace

TEST_SUITE("channel_model") {

TEST_CASE("derive_fso constants") {
    auto d = derive_fso(fig2_fso());
    CHECK(d.h == doctest::Approx(1.21 / 2.21).epsilon(1e-12));
    REQUIRE(d.k1.size() == 1);
    CHECK(d.k1[0] == doctest::Approx(2.21).epsilon(1e-14));
    REQUIRE(d.k2.size() == 3);
    CHECK(d.k2[0] == doctest::Approx(1.21).epsilon(1e-14));
    CHECK(d.k2[1] == doctest::Approx(2.902).epsilon(1e-14));
    CHECK(d.k2[2] == doctest::Approx(2.51).epsilon(1e-14));
    // r = 1 collapses I to A and rho to B
    CHECK(d.I == doctest::Approx(d.A).epsilon(1e-12));
    CHECK(d.rho == doctest::Approx(d.B).epsilon(1e-12));
    CHECK(d.Xi == doctest::Approx(1.0).epsilon(1e-12));
    // I = A * Xi holds for both detection types
    auto p2 = fig2_fso(3.0, 2);
    p2.a = 2.064;
    auto d2 = derive_fso(p2);
    CHECK(d2.I == doctest::Approx(d2.A * d2.Xi).epsilon(1e-12));
    const std::vector<double> expect_da{1.032, 1.532};
    CHECK(d2.k2[2] == doctest::Approx(expect_da[0]).epsilon(1e-12));
    CHECK(d2.k2[3] == doctest::Approx(expect_da[1]).epsilon(1e-12));
    CHECK(d2.k2.size() == 6);
}

TEST_CASE("fso pdf integrates to one and matches the cdf") {
    for (int r : {1, 2}) {
        FsoChannel ch(fig2_fso(2.5, r));
        const double mass =
            integrate([&](double g) { return ch.pdf(g); }, 0.0, 2.5, 1e-11, 1e-11).value +
            integrate_to_infinity([&](double g) { return ch.pdf(g); }, 2.5, 1e-11, 1e-11).value;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

        // mid-range CDF against quadrature of the density
        for (double g : {0.4, 1.7, 6.0}) {
            const double viaq =
                integrate([&](double x) { return ch.pdf(x); }, 0.0, g, 1e-12, 1e-12).value;
            CHECK(ch.cdf(g) == doctest::Approx(viaq).epsilon(1e-8));
        }
        CHECK(ch.cdf(0.0) == 0.0);
        CHECK(ch.cdf(2.5e6) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("fso cdf derivative reproduces the pdf (Eq-pair consistency)") {
    FsoChannel ch(fig2_fso(1.0));
    for (double g : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const double delta = 1e-4 * g;
        const double diff = ch.cdf(g + delta) - ch.cdf(g - delta);
        CHECK(std::abs(diff - 2.0 * delta * ch.pdf(g)) <= 1e-5 * std::max(1.0, diff));
        CHECK(diff / (2.0 * delta) == doctest::Approx(ch.pdf(g)).epsilon(1e-6));
    }
}

TEST_CASE("fso mean under heterodyne detection equals the electrical SNR") {
    FsoChannel ch(fig2_fso(3.7, 1));
    const double mean =
        integrate([&](double g) { return g * ch.pdf(g); }, 0.0, 3.7, 1e-11, 1e-11).value +
        integrate_to_infinity([&](double g) { return g * ch.pdf(g); }, 3.7, 1e-11, 1e-11).value;
    CHECK(mean == doctest::Approx(3.7).epsilon(1e-7));
}

TEST_CASE("argument-multiplication identity links the r=2 kernel to its expanded form") {
    auto p = fig2_fso(2.0, 2);
    FsoChannel ch(p);
    const auto& d = ch.derived();
    for (double g : {0.2, 1.0, 5.0}) {
        MeijerGSpec s;
        s.m = 6;
        s.n = 0;
        s.p = 2;
        s.q = 6;
        s.a_params = d.k1;
        s.b_params = d.k2;
        s.argument = d.rho * g;
        const double expanded = d.Xi * meijer_g_contour(s).value;
        const double kernel = ch.kernel(d.B * std::sqrt(g));
        CHECK(kernel == doctest::Approx(expanded).epsilon(1e-8));
    }
}

TEST_CASE("rf derived constants and scaling laws") {
    RfLinkParams p;
    p.m = 2;
    p.n_antennas = 3;
    p.alpha = 0.5;
    p.d = 10.0;
    p.eta = 3.0;
    p.lc = 3.597e-2;
    p.pt = 1e6;
    p.n0 = 1.0;
    p.sigma2 = 1.0;
    p.omega = 3.1623;
    auto d = derive_rf(p);
    CHECK(d.tau == 6);
    CHECK(d.phi ==
          doctest::Approx(p.m * std::pow(p.d, p.eta) * (p.alpha * p.n0 + p.sigma2) /
                          (p.alpha * p.pt * p.lc))
              .epsilon(1e-14));
    CHECK(d.lambda == doctest::Approx(d.phi / p.omega).epsilon(1e-14));

    // doubling the distance multiplies lambda by 2^eta exactly
    auto p2 = p;
    p2.d *= 2.0;
    CHECK(derive_rf(p2).lambda == doctest::Approx(d.lambda * 8.0).epsilon(1e-13));

    // alpha enters as (alpha n0 + sigma2) / alpha
    auto p3 = p;
    p3.alpha = 1.0;
    const double ratio = derive_rf(p3).lambda / d.lambda;
    CHECK(ratio == doctest::Approx(((1.0 * p.n0 + p.sigma2) / 1.0) /
                                   ((p.alpha * p.n0 + p.sigma2) / p.alpha))
                       .epsilon(1e-13));
}

TEST_CASE("rf cdf equals the regularized incomplete gamma and its Erlang form") {
    RfDerived d;
    d.tau = 6;
    d.lambda = 0.8;
    d.phi = 0.8;
    CHECK(rf_cdf(d, 0.0) == 0.0);
    CHECK(rf_cdf(d, 5.0) == doctest::Approx(0.21486961).epsilon(1e-7));
    CHECK(rf_cdf(d, 5.0) == doctest::Approx(gamma_p(6.0, 4.0)).epsilon(1e-14));
    for (double g : {0.1, 1.0, 5.0, 20.0, 80.0})
        CHECK(rf_cdf(d, g) == doctest::Approx(rf_cdf_erlang(d, g)).epsilon(1e-12));

    RfDerived e;
    e.tau = 1;
    e.lambda = 1.3;
    e.phi = 1.3;
    for (double g : {0.2, 1.0, 4.0})
        CHECK(rf_cdf(e, g) == doctest::Approx(1.0 - std::exp(-1.3 * g)).epsilon(1e-13));
}

TEST_CASE("rf sampler moments and exponential special case") {
    RfDerived d;
    d.tau = 6;
    d.lambda = 2.0;
    RandomStream rng(1234, 0);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_rf(d, rng);
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    const double mean_true = d.tau / d.lambda;
    const double mean_sd = std::sqrt(d.tau / (d.lambda * d.lambda) / n);
    CHECK(std::abs(mean - mean_true) < 4.0 * mean_sd);
    CHECK(std::abs(var - d.tau / (d.lambda * d.lambda)) <
          4.0 * std::sqrt(2.0 * d.tau * (d.tau + 3.0)) / d.lambda / d.lambda / std::sqrt(n));

    // tau = 1 draws follow an exponential law (KS at the 1% level)
    RfDerived e;
    e.tau = 1;
    e.lambda = 0.7;
    std::vector<double> xs(30000);
    RandomStream rng2(99, 7);
    for (auto& x : xs) x = sample_rf(e, rng2);
    const double dstat = ks_statistic(std::move(xs),
                                      [&](double x) { return 1.0 - std::exp(-0.7 * x); });
    CHECK(dstat < 1.6276 / std::sqrt(30000.0));
}

TEST_CASE("random streams are deterministic and worker-addressable") {
    RandomStream a(42, 17), b(42, 17), c(42, 18);
    for (int i = 0; i < 100; ++i) {
        const double ua = a.uniform();
        CHECK(ua == b.uniform());
        CHECK(ua > 0.0);
        CHECK(ua < 1.0);
    }
    // different stream ids decorrelate
    double diff = 0.0;
    RandomStream a2(42, 17);
    for (int i = 0; i < 100; ++i) diff += std::abs(a2.uniform() - c.uniform());
    CHECK(diff > 1.0);
}

TEST_CASE("fso inverse-cdf sampler: table accuracy and determinism") {
    FsoChannel ch(fig2_fso(2.0));
    FsoSampler sampler(ch, 1024);
    for (double u : {1e-8, 1e-4, 0.03, 0.25, 0.5, 0.75, 0.97, 0.9999, 1.0 - 1e-8}) {
        const double g = sampler.invert(u);
        CHECK(ch.cdf(g) == doctest::Approx(u).epsilon(5e-8));
    }
    RandomStream r1(7, 3), r2(7, 3);
    for (int i = 0; i < 50; ++i) CHECK(sampler.sample(r1) == sampler.sample(r2));
}

TEST_CASE("fso sampler mean is consistent with the heterodyne electrical SNR") {
    const double omega = 2.0;
    FsoChannel ch(fig2_fso(omega, 1));
    FsoSampler sampler(ch, 1024);
    RandomStream rng(8080, 0);
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sampler.sample(rng);
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double sd_mean = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean - omega) < 4.0 * sd_mean);
}

TEST_CASE("fso sampler passes a KS test against the closed-form cdf") {
    FsoChannel ch(fig2_fso(1.4));
    FsoSampler sampler(ch, 1024);
    const int n = 30000;
    std::vector<double> xs(n);
    RandomStream rng(2024, 0);
    for (auto& x : xs) x = sampler.sample(rng);
    const double d = ks_statistic(std::move(xs), [&](double g) { return ch.cdf(g); });
    CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("physical composition sampler agrees with the inverse-cdf sampler") {
    for (int r : {1, 2}) {
        FsoChannel ch(fig2_fso(1.0, r));
        FsoSampler sampler(ch, 1024);
        const int n = 20000;
        std::vector<double> a(n), b(n);
        RandomStream ra(5150, 1), rb(5150, 2);
        for (auto& x : a) x = sampler.sample(ra);
        for (auto& x : b) x = sample_fso_physical(ch.params(), rb);
        const double d = ks_two_sample(std::move(a), std::move(b));
        const double crit = 1.6276 * std::sqrt(2.0 / n);
        CHECK(d < crit);
    }
}

TEST_CASE("equivalent SNRs take the hop minima") {
    CHECK(equivalent_snrs(5.0, 3.0, 7.0) == std::pair<double, double>{3.0, 5.0});
    CHECK(equivalent_snrs(0.0, 11.0, 4.0) == std::pair<double, double>{0.0, 0.0});
    CHECK(equivalent_snrs(2.0, 2.0, 2.0) == std::pair<double, double>{2.0, 2.0});
    // the eavesdropper's equivalent SNR never exceeds gamma_SR
    RandomStream rng(1, 2);
    RfDerived d;
    d.tau = 2;
    d.lambda = 1.0;
    FsoChannel ch(fig2_fso(1.0));
    FsoSampler s(ch, 512);
    for (int i = 0; i < 500; ++i) {
        const double sr = s.sample(rng);
        const double re = sample_rf(d, rng);
        const auto [eqd, eqe] = equivalent_snrs(sr, sample_rf(d, rng), re);
        CHECK(eqe <= sr);
        CHECK(eqe <= re);
        CHECK(eqd <= sr);
    }
}

TEST_CASE("parameter validation") {
    FsoLinkParams p = fig2_fso();
    p.r = 3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = fig2_fso();
    p.xi = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    RfLinkParams q;
    q.alpha = 0.0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    SystemScenario sc;
    sc.fso = fig2_fso();
    sc.rs = -0.1;
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

} // TEST_SUITE
