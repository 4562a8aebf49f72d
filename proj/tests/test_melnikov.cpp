#include "test_support.h"

#include "lorenz5/melnikov.h"

#include <doctest.h>

#include <cmath>

using namespace lorenz5;
using namespace lorenz5::melnikov;
using analytic::HeteroclinicBranch;
using analytic::MelnikovSetup;

// Reference values below come from 30-digit mpmath quadrature of
// -M sech(Mt) M tanh(Mt) sqrt(2k) sin(t + theta0) over the real line.

TEST_CASE("integrand at a reference point") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    CHECK(integrand(1.0, s) == doctest::Approx(-0.41531166290138014).epsilon(1e-15));
    CHECK(integrand(0.0, s) == 0.0);
}

TEST_CASE("integrand equals the bracket {F, H1} along the unperturbed orbit") {
    test::Gen gen(61);
    for (int n = 0; n < 200; ++n) {
        const MelnikovSetup s(gen.uniform(0.3, 3.0), gen.uniform(0.0, 2.0), gen.uniform(0.0, kTwoPi));
        const double t = gen.uniform(-10.0, 10.0);
        for (const auto& b : HeteroclinicBranch::all())
            CHECK(integrand_via_bracket(t, s, b) == doctest::Approx(integrand(t, s, b)).epsilon(1e-12).scale(1e-300));
    }
}

TEST_CASE("numeric Melnikov function against reference values") {
    struct Case {
        double M, k, theta0, value;
    };
    const Case cases[] = {{1.0, 0.5, 0.0, -1.2520403312521476},
                          {0.5, 0.25, 1.0, -0.10354164820773843},
                          {2.0, 1.0, 2.5, 2.6871228118613693}};
    for (const Case& c : cases) {
        const MelnikovValue v = melnikov_numeric(MelnikovSetup(c.M, c.k, c.theta0));
        CHECK(v.converged);
        CHECK(std::fabs(v.value - c.value) < 1e-10);
        CHECK(std::fabs(melnikov_closed(MelnikovSetup(c.M, c.k, c.theta0)) - c.value) < 1e-14);
    }
}

TEST_CASE("numeric and closed forms agree on random parameters and every branch") {
    test::Gen gen(67);
    for (int n = 0; n < 60; ++n) {
        const MelnikovSetup s(gen.uniform(0.3, 3.0), gen.uniform(0.0, 2.0), gen.uniform(0.0, kTwoPi));
        for (const auto& b : HeteroclinicBranch::all()) {
            const MelnikovValue v = melnikov_numeric(s, b);
            CHECK(v.converged);
            CHECK(std::fabs(v.value - melnikov_closed(s, b)) < 1e-8);
        }
    }
}

TEST_CASE("branch sign enters through s3") {
    const MelnikovSetup s(1.0, 0.5, 0.3);
    CHECK(melnikov_closed(s, HeteroclinicBranch::parse("+--")) == -melnikov_closed(s));
    CHECK(melnikov_closed(s, HeteroclinicBranch::parse("--+")) == melnikov_closed(s));
    CHECK(melnikov_numeric(s, HeteroclinicBranch::parse("-+-")).value ==
          doctest::Approx(-melnikov_numeric(s).value).epsilon(1e-12));
}

TEST_CASE("tail bound and truncation") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    CHECK(tail_bound(s, 10.0) > tail_bound(s, 20.0));
    CHECK(tail_bound(s, 50.0) < 1e-12);
    CHECK(QuadConfig{}.truncation(2.0) == 25.0);
    QuadConfig shortq;
    shortq.T = 2.0;
    CHECK_FALSE(melnikov_numeric(s, {}, shortq).converged);
}

TEST_CASE("periodic grid excludes the endpoint") {
    const auto g = periodic_grid(4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 0.0);
    CHECK(g[2] == doctest::Approx(kPi));
    CHECK(g[3] < kTwoPi);
}

TEST_CASE("zeros are simple and sit at pi/2 + n pi") {
    for (double M : {0.5, 1.0, 2.0})
        for (double k : {0.25, 0.5, 1.0}) {
            const MelnikovSetup s(M, k, 0.0);
            const MelnikovProfile p = build_profile(s, {}, periodic_grid(128));
            CHECK(p.max_abs_error() < 1e-8);
            const ZeroSearch z = find_zeros(p);
            CHECK_FALSE(z.degenerate);
            REQUIRE(z.zeros.size() == 2);
            const double slope = closed_zero_slope(s);
            CHECK(std::fabs(z.zeros[0].theta0 - kPi / 2) < 1e-6);
            CHECK(std::fabs(z.zeros[1].theta0 - 3 * kPi / 2) < 1e-6);
            for (const auto& zero : z.zeros) {
                CHECK(zero.simple);
                CHECK(std::fabs(std::fabs(zero.derivative) - slope) < 0.01 * slope);
            }
            CHECK(z.zeros[0].derivative > 0.0);
            CHECK(z.zeros[1].derivative < 0.0);
        }
}

TEST_CASE("k = 0 gives an identically zero, degenerate profile") {
    const MelnikovProfile p = build_profile(MelnikovSetup(1.0, 0.0, 0.0), {}, periodic_grid(32));
    for (double v : p.numeric) CHECK(v == 0.0);
    const ZeroSearch z = find_zeros(p);
    CHECK(z.degenerate);
    CHECK(z.zeros.empty());
}

TEST_CASE("zero search on a grid that starts at a zero and wraps") {
    std::vector<double> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(kPi / 2 + kTwoPi * i / 16.0);
    const MelnikovProfile p = build_profile(MelnikovSetup(1.0, 0.5, 0.0), {}, grid);
    const ZeroSearch z = find_zeros(p);
    REQUIRE(z.zeros.size() >= 2);
    for (const auto& zero : z.zeros) {
        const double d = std::fmod(zero.theta0 - kPi / 2 + kTwoPi, kPi);
        CHECK(std::fmin(d, kPi - d) < 1e-6);
    }
    CHECK_THROWS_AS(find_zeros(build_profile(MelnikovSetup(1.0, 0.5, 0.0), {}, {0.0})), ConfigError);
}

TEST_CASE("profile does not depend on the thread count") {
    const MelnikovSetup s(1.3, 0.7, 0.0);
    const auto grid = periodic_grid(40);
    const MelnikovProfile a = build_profile(s, {}, grid, {}, 1);
    const MelnikovProfile b = build_profile(s, {}, grid, {}, 4);
    CHECK(a.numeric == b.numeric);
    CHECK(a.closed == b.closed);
}

TEST_CASE("harmonic fit") {
    std::vector<double> th, v;
    for (int i = 0; i < 16; ++i) {
        th.push_back(kTwoPi * i / 16.0);
        v.push_back(-1.25 * std::cos(th.back()) + 0.3 * std::sin(th.back()));
    }
    const HarmonicFit f = fit_harmonic(th, v);
    CHECK(f.A == doctest::Approx(-1.25).epsilon(1e-13));
    CHECK(f.B == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(f.rms_residual < 1e-14);
    CHECK_THROWS_AS(fit_harmonic({0.0}, {1.0}), ConfigError);
    CHECK_THROWS_AS(fit_harmonic({0.0, kPi}, {1.0, -1.0}), ConfigError);
}
