// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "lorenz5/analytic.h"
#include "lorenz5/diagnostics.h"
#include "lorenz5/geometry.h"
#include "lorenz5/melnikov.h"
#include "lorenz5/models.h"
#include "lorenz5/numerics.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

using namespace lorenz5;
using analytic::HeteroclinicBranch;
using analytic::MelnikovSetup;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

const double kMs[] = {0.5, 1.0, 2.0};
const double kKs[] = {0.25, 0.5, 1.0};

void melnikov_closed_form() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    bool converged = true;
    for (double M : kMs)
        for (double k : kKs) {
            const auto p = melnikov::build_profile(MelnikovSetup(M, k, 0.0), {}, melnikov::periodic_grid(128));
            worst = std::fmax(worst, p.max_abs_error());
            converged = converged && p.all_converged;
        }
    const double dt = seconds_since(t0);
    report(1, worst < 1e-8 && converged && dt < 10.0,
           fmt("max |numeric - closed| = %.3e (< 1e-8), runtime %.2f s (< 10 s)", worst, dt));
}

void simple_zeros() {
    double loc = 0.0, slope = 0.0;
    bool ok = true;
    for (double M : kMs)
        for (double k : kKs) {
            const MelnikovSetup s(M, k, 0.0);
            const auto p = melnikov::build_profile(s, {}, melnikov::periodic_grid(128));
            const auto z = melnikov::find_zeros(p);
            ok = ok && !z.degenerate && z.zeros.size() == 2;
            const double expected = melnikov::closed_zero_slope(s);
            for (const auto& zero : z.zeros) {
                const double d = std::fmod(zero.theta0 - kPi / 2 + kTwoPi, kPi);
                loc = std::fmax(loc, std::fmin(d, kPi - d));
                slope = std::fmax(slope, std::fabs(std::fabs(zero.derivative) - expected) / expected);
                ok = ok && zero.simple;
            }
        }
    report(2, ok && loc < 1e-6 && slope < 0.01,
           fmt("max zero offset from pi/2 + n pi = %.3e (< 1e-6), max slope rel. error = %.3e (< 0.01)", loc, slope));
}

void first_order_splitting() {
    const auto t0 = Clock::now();
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const auto grid = melnikov::periodic_grid(16);
    std::vector<double> ratio, oracle;
    bool ok = true;
    for (double th : grid) {
        const auto d = diagnostics::delta_f_experiment(1e-3, s.with_theta0(th), {}, 30.0);
        ok = ok && d.ok();
        ratio.push_back(d.ratio);
        oracle.push_back(d.oracle);
    }
    const auto fit = melnikov::fit_harmonic(grid, ratio);
    const auto fit_oracle = melnikov::fit_harmonic(grid, oracle);
    const double target = -kPi * sech(kPi / 2);
    const double rel = std::fabs(fit.A - target) / std::fabs(target);
    const double dt = seconds_since(t0);
    report(3, ok && rel < 0.05 && dt < 60.0,
           fmt("A = %.6f vs %.6f (rel. error %.2e < 0.05), oracle A = %.6f", fit.A, target, rel, fit_oracle.A) +
               fmt(", runtime %.2f s (< 60 s)", dt));
}

void structural_suite() {
    std::mt19937_64 rng(20020308);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    auto point = [&] {
        State p{};
        for (auto& v : p) v = coord(rng);
        return p;
    };
    const geometry::PoissonStructure s1 = geometry::r5_structure();
    const geometry::PoissonStructure s2 = geometry::se2_r2_structure();
    const geometry::ScalarField c = models::casimir_field();
    const geometry::ScalarField h = models::hamiltonian_r5_field();
    double anti = 0.0, jac = 0.0, cas = 0.0, push = 0.0, hvf = 0.0;
    for (int n = 0; n < 100; ++n) {
        const State p = point();
        for (double eps : {0.0, 0.1, 1.0}) {
            anti = std::fmax(anti, geometry::antisymmetry_defect(s1.matrix(p, eps)));
            anti = std::fmax(anti, geometry::antisymmetry_defect(s2.matrix(p, eps)));
            for (std::size_t i = 0; i < kDim; ++i)
                for (std::size_t j = 0; j < kDim; ++j)
                    for (std::size_t k = 0; k < kDim; ++k) {
                        if (i == j || j == k || i == k) continue;
                        jac = std::fmax(jac, std::fabs(geometry::jacobi_residual(s1, p, i, j, k, eps)));
                        jac = std::fmax(jac, std::fabs(geometry::jacobi_residual(s2, p, i, j, k, eps)));
                    }
            cas = std::fmax(cas, norm_inf(geometry::casimir_residual(s1, c, p, eps)));
            cas = std::fmax(cas, norm_inf(geometry::casimir_residual(s2, c, p, eps)));
        }
    }
    std::uniform_real_distribution<double> eps_dist(-1.0, 1.0);
    for (int n = 0; n < 1000; ++n) {
        const State x = point();
        const double eps = eps_dist(rng);
        push = std::fmax(push, norm_inf(models::pushforward_residual(x, eps)));
        hvf = std::fmax(hvf,
                        norm_inf(sub(geometry::hamiltonian_vector_field(s1, h, x, eps), models::lorenz5_rhs(x, eps))));
        hvf = std::fmax(hvf,
                        norm_inf(sub(geometry::hamiltonian_vector_field(s2, models::hamiltonian_eps_field(eps), x, eps),
                                     models::transformed_rhs(x, eps))));
    }
    report(4, anti == 0.0 && jac < 1e-10 && cas < 1e-12 && push < 1e-12 && hvf < 1e-12,
           fmt("antisymmetry %.1e (== 0), Jacobi %.2e (< 1e-10), Casimir %.2e (< 1e-12), pushforward %.2e (< 1e-12)",
               anti, jac, cas, push) +
               fmt(", J grad H vs rhs %.2e (< 1e-12)", hvf));
}

void heteroclinic_orbits() {
    double admissible = 0.0;
    double weakest_negative = INFINITY;
    for (double M : kMs) {
        for (const auto& b : HeteroclinicBranch::all())
            for (int i = 0; i <= 4000; ++i) {
                const double t = -20.0 / M + 40.0 / M * i / 4000.0;
                admissible = std::fmax(admissible, analytic::heteroclinic_ode_residual(t, M, b.s1(), b.s2(), b.s3()));
            }
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1})
                for (int s3 : {-1, 1}) {
                    if (HeteroclinicBranch::admissible(s1, s2, s3)) continue;
                    double worst = 0.0;
                    for (int i = 0; i <= 4000; ++i) {
                        const double t = -20.0 / M + 40.0 / M * i / 4000.0;
                        worst = std::fmax(worst, analytic::heteroclinic_ode_residual(t, M, s1, s2, s3));
                    }
                    weakest_negative = std::fmin(weakest_negative, worst / (M * M));
                }
    }
    report(5, admissible < 1e-13 && weakest_negative > 0.1,
           fmt("admissible residual %.2e (< 1e-13), weakest inadmissible residual / M^2 = %.3f (> 0.1)", admissible,
               weakest_negative));
}

void conservation() {
    numerics::IntegratorConfig cfg;
    cfg.rtol = cfg.atol = 1e-10;
    double dh = 0.0, dc = 0.0;
    bool ok = true;
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const State seeds[] = {diagnostics::separatrix_seed(s), diagnostics::regular_seed(s),
                           State{0.3, 0.8, -0.2, 0.5, 0.1}};
    for (double eps : {0.0, 0.1, 1.0})
        for (const State& x0 : seeds) {
            const auto tr =
                numerics::integrate([eps](const State& p) { return models::transformed_rhs(p, eps); }, x0, 0.0, 100.0,
                                    cfg, {models::hamiltonian_eps_field(eps), models::casimir_field()});
            ok = ok && tr.ok();
            dh = std::fmax(dh, tr.drift("H_eps"));
            dc = std::fmax(dc, tr.drift("casimir"));
        }
    report(6, ok && dh < 1e-7 && dc < 1e-7, fmt("drift H^eps %.2e, Casimir %.2e (each < 1e-7)", dh, dc));
}

void chaos_indicators() {
    const auto t0 = Clock::now();
    const MelnikovSetup s(1.0, 0.5, 0.0);
    const diagnostics::LyapunovParams lp;
    const auto regular = diagnostics::lyapunov_mle(0.0, diagnostics::regular_seed(s), lp);
    const auto layer = diagnostics::lyapunov_mle(0.1, diagnostics::separatrix_seed(s), lp);
    const auto quiet = diagnostics::poincare_section(0.0, diagnostics::separatrix_seed(s), 0.0, 200);
    const auto mixed = diagnostics::poincare_section(0.1, diagnostics::separatrix_seed(s), 0.0, 200);
    const double spread_ratio = mixed.f_spread() / std::fmax(quiet.f_spread(), 1e-300);
    const double dt = seconds_since(t0);
    const bool ok = regular.ok() && layer.ok() && quiet.complete && mixed.complete && regular.lambda_max < 0.02 &&
                    layer.lambda_max > 0.02 && layer.lambda_max > 5.0 * regular.lambda_max && spread_ratio > 100.0 &&
                    dt < 300.0;
    report(7, ok,
           fmt("lambda(eps=0, regular) = %.4f (< 0.02), lambda(eps=0.1, layer) = %.4f (> 0.02, > 5x), F-spread ratio "
               "%.3e (> 100)",
               regular.lambda_max, layer.lambda_max, spread_ratio) +
               fmt(", runtime %.1f s (< 300 s)", dt));
}

} // namespace

int main() {
    melnikov_closed_form();
    simple_zeros();
    first_order_splitting();
    structural_suite();
    heteroclinic_orbits();
    conservation();
    chaos_indicators();
    std::printf("%s: %d of 7 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
