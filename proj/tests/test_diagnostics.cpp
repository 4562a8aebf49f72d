#include "test_support.h"

#include "lorenz5/diagnostics.h"
#include "lorenz5/models.h"

#include <doctest.h>

#include <cmath>

using namespace lorenz5;
using namespace lorenz5::diagnostics;
using analytic::HeteroclinicBranch;
using analytic::MelnikovSetup;

TEST_CASE("seeds") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const State sep = separatrix_seed(s);
    CHECK(sep[0] == 1.0);
    CHECK(sep[1] == 0.0);
    CHECK(sep[2] == 1.0);
    CHECK(models::oscillator_action(sep) == doctest::Approx(0.5));
    const State reg = regular_seed(s);
    CHECK(models::casimir(reg) == doctest::Approx(1.0));
    CHECK(models::hamiltonian_eps(reg, 0.0) == doctest::Approx(s.h()));
}

TEST_CASE("saddle response vanishes without forcing") {
    const State r = saddle_response(1.0, 0.5, 0.3, 0.0);
    CHECK(norm_inf(r) == 0.0);
    const State r1 = saddle_response(1.0, 0.5, 0.3, 1e-3);
    CHECK(norm_inf(r1) > 0.0);
    CHECK(norm_inf(r1) < 1e-3);
}

TEST_CASE("first-order splitting of F matches the Melnikov function") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    for (double th : {0.0, 0.8, 2.0, 4.0}) {
        const DeltaFResult d = delta_f_experiment(1e-3, s.with_theta0(th), {}, 30.0);
        REQUIRE(d.ok());
        CHECK(d.prediction == doctest::Approx(-1.2520403312521476 * std::cos(th)));
        CHECK(std::fabs(d.ratio - d.prediction) < 2e-3);
        CHECK(std::fabs(d.oracle - d.ratio) < 2e-3);
        CHECK(d.window <= 30.0);
    }
}

TEST_CASE("splitting follows the branch sign") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const DeltaFResult d = delta_f_experiment(1e-3, s, HeteroclinicBranch::parse("+--"), 30.0);
    REQUIRE(d.ok());
    CHECK(d.ratio == doctest::Approx(1.2520403312521476).epsilon(3e-3));
}

TEST_CASE("no splitting at eps = 0") {
    const DeltaFResult d = delta_f_experiment(0.0, MelnikovSetup(1.0, 0.5, 0.7), {}, 30.0);
    CHECK(d.ok());
    CHECK(std::fabs(d.delta_f) < 1e-10);
    CHECK(std::isnan(d.ratio));
    CHECK_THROWS_AS(delta_f_experiment(-1e-3, MelnikovSetup(1.0, 0.5, 0.0), {}, 30.0), DomainError);
    CHECK_THROWS_AS(delta_f_experiment(1e-3, MelnikovSetup(1.0, 0.5, 0.0), {}, 0.0), DomainError);
}

TEST_CASE("Poincare section of the unperturbed flow keeps F fixed") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const PoincareResult pr = poincare_section(0.0, regular_seed(s), 0.0, 40);
    REQUIRE(pr.complete);
    REQUIRE(pr.points.size() == 40);
    CHECK(pr.reverse_crossings == 0);
    CHECK(pr.f_spread() < 1e-8);
    CHECK(pr.casimir_spread() < 1e-8);
    for (const auto& p : pr.points) CHECK(p.theta_error < 1e-10);
    for (std::size_t i = 1; i < pr.points.size(); ++i)
        CHECK(pr.points[i].t - pr.points[i - 1].t == doctest::Approx(kTwoPi).epsilon(1e-8));
}

TEST_CASE("Poincare section spreads F in the separatrix layer") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const PoincareResult quiet = poincare_section(0.0, separatrix_seed(s), 0.0, 100);
    const PoincareResult layer = poincare_section(0.1, separatrix_seed(s), 0.0, 100);
    REQUIRE(quiet.complete);
    REQUIRE(layer.complete);
    CHECK(layer.f_spread() > 100.0 * quiet.f_spread());
    CHECK(layer.casimir_spread() < 1e-7);
}

TEST_CASE("Poincare section reports an incomplete run") {
    const PoincareResult pr = poincare_section(0.1, regular_seed(MelnikovSetup(1.0, 0.5, 0.0)), 0.0, 50, {}, 20.0);
    CHECK_FALSE(pr.complete);
    CHECK(pr.points.size() < 50);
}

TEST_CASE("Lyapunov estimates separate regular and layer orbits") {
    const MelnikovSetup s(1.0, 0.5, 0.0);
    LyapunovParams p;
    p.total_time = 1000.0;
    const LyapunovEstimate regular = lyapunov_mle(0.0, regular_seed(s), p);
    const LyapunovEstimate layer = lyapunov_mle(0.1, separatrix_seed(s), p);
    REQUIRE(regular.ok());
    REQUIRE(layer.ok());
    CHECK(regular.lambda_max < 0.02);
    CHECK(layer.lambda_max > 0.02);
    CHECK(layer.lambda_max > 5.0 * regular.lambda_max);
    CHECK(layer.times.size() == 1000);
    CHECK(layer.series.back() == layer.lambda_max);
}

TEST_CASE("Lyapunov estimate is reproducible for a fixed seed") {
    LyapunovParams p;
    p.total_time = 100.0;
    const State x0 = separatrix_seed(MelnikovSetup(1.0, 0.5, 0.0));
    const LyapunovEstimate a = lyapunov_mle(0.1, x0, p);
    const LyapunovEstimate b = lyapunov_mle(0.1, x0, p);
    CHECK(a.series == b.series);
    p.seed = 7;
    const LyapunovEstimate c = lyapunov_mle(0.1, x0, p);
    CHECK(c.series != a.series);
    p.delta0 = 0.0;
    CHECK_THROWS_AS(lyapunov_mle(0.1, x0, p), ConfigError);
    p.delta0 = 1e-8;
    p.renorm_interval = 200.0;
    CHECK_THROWS_AS(lyapunov_mle(0.1, x0, p), ConfigError);
}

TEST_CASE("sweep task names") {
    for (auto t : {SweepTask::None, SweepTask::MelnikovAmplitude, SweepTask::DeltaF, SweepTask::Lyapunov})
        CHECK(parse_sweep_task(to_string(t)) == t);
    CHECK_THROWS_AS(parse_sweep_task("bogus"), ConfigError);
}

TEST_CASE("sweep grid validation") {
    SweepGrid g;
    CHECK_NOTHROW(g.validate());
    g.k.clear();
    CHECK_THROWS_AS(g.validate(), ConfigError);
    g.k = {0.5, NAN};
    CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("sweep row order, thread independence and per-cell failures") {
    SweepGrid g;
    g.task = SweepTask::MelnikovAmplitude;
    g.eps = {0.0, 0.1};
    g.M = {0.5, -1.0, 1.0};
    g.k = {0.5};
    g.theta0 = {0.0, 1.0};
    SweepOptions one;
    SweepOptions four;
    four.threads = 4;
    const SweepTable a = sweep(g, one);
    const SweepTable b = sweep(g, four);
    REQUIRE(a.rows.size() == g.cells());
    CHECK(a.columns == sweep_columns(SweepTask::MelnikovAmplitude));
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        REQUIRE(a.rows[i].values.size() == b.rows[i].values.size());
        for (std::size_t j = 0; j < a.rows[i].values.size(); ++j) {
            const double x = a.rows[i].values[j], y = b.rows[i].values[j];
            CHECK(((std::isnan(x) && std::isnan(y)) || x == y));
        }
        CHECK(a.rows[i].status == b.rows[i].status);
    }
    CHECK(a.rows[0].eps == 0.0);
    CHECK(a.rows[0].M == 0.5);
    CHECK(a.rows[1].theta0 == 1.0);
    CHECK(a.rows[2].M == -1.0);
    CHECK(a.rows[2].status != "ok");
    CHECK(a.rows[6].eps == 0.1);
    CHECK(a.rows[4].status == "ok");
}
