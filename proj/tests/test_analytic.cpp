#include "test_support.h"

#include "lorenz5/analytic.h"
#include "lorenz5/models.h"

#include <doctest.h>

#include <cmath>

using namespace lorenz5;
using namespace lorenz5::analytic;

TEST_CASE("branch parsing and admissibility") {
    CHECK(HeteroclinicBranch() == HeteroclinicBranch(1, 1, 1));
    CHECK(HeteroclinicBranch::parse("+--") == HeteroclinicBranch(1, -1, -1));
    CHECK(HeteroclinicBranch::parse("-+-").to_string() == "-+-");
    CHECK(HeteroclinicBranch::parse("--+").s3() == 1);
    CHECK_THROWS_AS(HeteroclinicBranch::parse("++-"), DomainError);
    CHECK_THROWS_AS(HeteroclinicBranch::parse("++"), DomainError);
    CHECK_THROWS_AS(HeteroclinicBranch::parse("+x+"), DomainError);
    CHECK_THROWS_AS(HeteroclinicBranch(1, 1, -1), DomainError);
    CHECK_THROWS_AS(HeteroclinicBranch(2, 1, 2), DomainError);
    int admissible = 0;
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1})
            for (int s3 : {-1, 1}) admissible += HeteroclinicBranch::admissible(s1, s2, s3) ? 1 : 0;
    CHECK(admissible == 4);
    for (const auto& b : HeteroclinicBranch::all()) CHECK(b.s1() == b.s2() * b.s3());
}

TEST_CASE("setup validation and energy bookkeeping") {
    const MelnikovSetup s(1.5, 0.25, 0.3);
    CHECK(s.h_tilde() == 2.25);
    CHECK(s.h() == 2.5);
    CHECK(s.action() == doctest::Approx(0.25));
    CHECK(s.omega() == 1.0);
    CHECK(s.with_theta0(2.0).theta0() == 2.0);
    CHECK_THROWS_AS(MelnikovSetup(0.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(MelnikovSetup(-1.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(MelnikovSetup(1.0, -0.1, 0.0), DomainError);
    CHECK_THROWS_AS(MelnikovSetup(1.0, 0.5, std::nan("")), DomainError);
    CHECK_NOTHROW(MelnikovSetup(1.0, 0.0, 0.0));
}

TEST_CASE("heteroclinic orbit at t = 0 and its limits") {
    const Mu m0 = heteroclinic(0.0, 2.0);
    CHECK(m0[0] == 2.0);
    CHECK(m0[1] == 0.0);
    CHECK(m0[2] == 2.0);
    const Mu far = heteroclinic(40.0, 2.0);
    CHECK(std::fabs(far[0]) < 1e-30);
    CHECK(far[1] == doctest::Approx(2.0));
    const Mu back = heteroclinic(-40.0, 2.0, HeteroclinicBranch::parse("+--"));
    CHECK(back[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(heteroclinic(0.0, 0.0), DomainError);
}

TEST_CASE("heteroclinic orbits lie on the separatrix energy and cylinder") {
    test::Gen gen(43);
    for (int n = 0; n < 300; ++n) {
        const double M = gen.uniform(0.2, 3.0);
        const double t = gen.uniform(-15.0, 15.0);
        for (const auto& b : HeteroclinicBranch::all()) {
            const Mu mu = heteroclinic(t, M, b);
            const State p{mu[0], mu[1], mu[2], 0.0, 0.0};
            CHECK(models::lie_poisson_energy(p) == doctest::Approx(M * M).epsilon(1e-14));
            CHECK(models::casimir(p) == doctest::Approx(M * M).epsilon(1e-14));
        }
    }
}

TEST_CASE("admissible closed forms solve the unperturbed equations") {
    for (double M : {0.5, 1.0, 2.0})
        for (const auto& b : HeteroclinicBranch::all()) {
            double worst = 0.0;
            for (int i = 0; i <= 4000; ++i) {
                const double t = -20.0 / M + 40.0 / M * i / 4000.0;
                worst = std::fmax(worst, heteroclinic_ode_residual(t, M, b.s1(), b.s2(), b.s3()));
            }
            CHECK(worst < 1e-13);
        }
}

TEST_CASE("inadmissible sign triples fail the equations") {
    for (double M : {0.5, 1.0, 2.0})
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1})
                for (int s3 : {-1, 1}) {
                    if (HeteroclinicBranch::admissible(s1, s2, s3)) continue;
                    double worst = 0.0;
                    for (int i = 0; i <= 400; ++i)
                        worst = std::fmax(worst, heteroclinic_ode_residual(-20.0 / M + 0.1 * i / M, M, s1, s2, s3));
                    CHECK(worst > 0.1 * M * M);
                }
}

TEST_CASE("velocity of the closed form matches finite differences") {
    const auto b = HeteroclinicBranch::parse("-+-");
    for (double t : {-3.0, -0.5, 0.0, 0.7, 2.0}) {
        const double h = 1e-6;
        const Mu a = heteroclinic(t + h, 1.3, b), c = heteroclinic(t - h, 1.3, b);
        const Mu v = heteroclinic_velocity(t, 1.3, b);
        for (std::size_t i = 0; i < 3; ++i) CHECK(v[i] == doctest::Approx((a[i] - c[i]) / (2 * h)).epsilon(1e-8));
    }
}

TEST_CASE("saddle points are equilibria with the expected spectrum") {
    const auto [plus, minus] = saddle_points(1.5);
    CHECK(plus[1] == 1.5);
    CHECK(minus[1] == -1.5);
    CHECK(norm_inf(models::transformed_rhs(plus, 0.0)) == 0.0);
    CHECK(norm_inf(models::transformed_rhs(minus, 0.0)) == 0.0);
    // At (0, M, 0): (1, 0, -1) grows at rate M, (1, 0, 1) decays at rate M.
    const auto j = models::mu_jacobian(0.0, 1.5, 0.0, 0.0);
    const double grow[3] = {1, 0, -1}, decay[3] = {1, 0, 1};
    for (std::size_t r = 0; r < 3; ++r) {
        double jg = 0.0, jd = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            jg += j[r][c] * grow[c];
            jd += j[r][c] * decay[c];
        }
        CHECK(jg == doctest::Approx(1.5 * grow[r]));
        CHECK(jd == doctest::Approx(-1.5 * decay[r]));
    }
    CHECK_THROWS_AS(saddle_points(-1.0), DomainError);
}

TEST_CASE("action-angle round trip") {
    test::Gen gen(47);
    for (int n = 0; n < 500; ++n) {
        const double action = gen.uniform(1e-6, 5.0);
        const double theta = gen.uniform(0.0, kTwoPi);
        const Cartesian c = action_angle_to_cart(action, theta);
        const ActionAngle back = cart_to_action_angle(c.u1, c.u2);
        CHECK(back.action == doctest::Approx(action).epsilon(1e-13));
        REQUIRE(back.angle.has_value());
        const double d = std::fabs(*back.angle - theta);
        CHECK(std::fmin(d, kTwoPi - d) < 1e-12);
    }
    CHECK_FALSE(cart_to_action_angle(0.0, 0.0).angle.has_value());
    CHECK(cart_to_action_angle(0.0, 0.0).action == 0.0);
    CHECK_THROWS_AS(action_angle_to_cart(-1.0, 0.0), DomainError);
}

TEST_CASE("angle wrapping") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kTwoPi) == 0.0);
    CHECK(wrap_angle(-1e-300) == 0.0);
    CHECK(wrap_angle(-kPi / 2) == doctest::Approx(3 * kPi / 2));
    CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
    test::Gen gen(53);
    for (int n = 0; n < 1000; ++n) {
        const double w = wrap_angle(gen.uniform(-100.0, 100.0));
        CHECK(w >= 0.0);
        CHECK(w < kTwoPi);
    }
}

TEST_CASE("unperturbed orbit carries the level energy h") {
    const MelnikovSetup s(1.0, 0.5, 0.4);
    for (double t : {-8.0, -1.0, 0.0, 2.5, 9.0}) {
        const OrbitPoint o = unperturbed_orbit(t, s);
        CHECK(o.action == doctest::Approx(0.5));
        CHECK(o.theta == doctest::Approx(t + 0.4));
        CHECK(models::lie_poisson_energy(o.state) + models::oscillator_action(o.state) ==
              doctest::Approx(s.h()).epsilon(1e-14));
        CHECK(models::hamiltonian_eps(o.state, 0.0) == doctest::Approx(s.h()).epsilon(1e-14));
    }
}
