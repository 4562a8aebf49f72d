#include "lorenz5/diagnostics.h"

#include "lorenz5/geometry.h"
#include "lorenz5/models.h"
#include "lorenz5/parallel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace lorenz5::diagnostics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

numerics::VectorField transformed_field(double eps) {
    return [eps](const State& p) { return models::transformed_rhs(p, eps); };
}

} // namespace

IntegratorConfig tight_config() {
    IntegratorConfig c;
    c.method = numerics::Method::DormandPrince45;
    c.rtol = 1e-12;
    c.atol = 1e-12;
    return c;
}

State separatrix_seed(const MelnikovSetup& s, const HeteroclinicBranch& b) {
    return analytic::unperturbed_orbit(0.0, s, b).state;
}

State regular_seed(const MelnikovSetup& s) {
    const double M = s.M();
    const State mu_only{M, 0.0, 0.5 * M, 0.0, 0.0};
    const double action = s.h() - models::lie_poisson_energy(mu_only);
    const analytic::Cartesian u = analytic::action_angle_to_cart(action, s.theta0());
    return {M, 0.0, 0.5 * M, u.u1, u.u2};
}

State saddle_response(double c, double k, double phase, double eps) {
    const double amp = eps * std::sqrt(2.0 * k) / (1.0 + c * c);
    return {-amp * c * std::cos(phase), 0.0, amp * c * c * std::sin(phase), 0.0, 0.0};
}

DeltaFResult delta_f_experiment(double eps, const MelnikovSetup& s, const HeteroclinicBranch& b, double T,
                                const IntegratorConfig& cfg) {
    require_finite(eps, "delta_f_experiment eps");
    if (eps < 0.0) throw DomainError("delta_f_experiment: eps must be >= 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("delta_f_experiment: T must be positive");

    const double M = s.M();
    DeltaFResult r;
    r.window = eps > 0.0 ? std::min(T, 1.5 * std::log(1.0 / eps) / M) : T;
    r.window = std::max(r.window, 1.0 / M);
    r.prediction = s.omega() * melnikov::melnikov_closed(s, b);

    const geometry::PoissonStructure structure = geometry::se2_r2_structure();
    const geometry::ScalarField F = models::lie_poisson_energy_field();
    const geometry::ScalarField H1 = models::perturbation_field();

    // State augmented with the running integral of eps {F, H1}.
    using Aug = numerics::VecN<6>;
    auto rhs = [&](const Aug& y) {
        const State p{y[0], y[1], y[2], y[3], y[4]};
        const Vec5 f = models::transformed_rhs(p, eps);
        const double q = eps * geometry::bracket(structure, F, H1, p, 0.0, geometry::GradientPolicy::AnalyticOnly);
        return Aug{f[0], f[1], f[2], f[3], f[4], q};
    };

    auto leg = [&](double t_seed, double saddle_mu2) {
        const State orbit = analytic::unperturbed_orbit(t_seed, s, b).state;
        const State offset = saddle_response(saddle_mu2, s.k(), t_seed + s.theta0(), eps);
        Aug y{};
        for (std::size_t i = 0; i < kDim; ++i) y[i] = orbit[i] + offset[i];
        double t = t_seed;
        const IntegrationStatus st = numerics::propagate_n<6>(rhs, y, t, 0.0, cfg);
        if (st != IntegrationStatus::Ok) r.status = st;
        return y;
    };

    const double W = r.window;
    const Aug unstable = leg(-W, -b.s2() * M);
    const Aug stable = leg(W, b.s2() * M);

    auto F_of = [](const Aug& y) { return models::lie_poisson_energy({y[0], y[1], y[2], y[3], y[4]}); };
    r.delta_f = F_of(unstable) - F_of(stable);

    const analytic::Mu mid = analytic::heteroclinic(0.0, M, b);
    for (const Aug* y : {&unstable, &stable}) {
        double d = 0.0;
        for (std::size_t i = 0; i < 3; ++i) d = std::fmax(d, std::fabs((*y)[i] - mid[i]));
        if (!(d < 0.1 * M)) r.shadowing = false;
    }

    if (eps > 0.0) {
        // Unperturbed integrand beyond the window, where the legs start.
        double tails = 0.0;
        const double far = std::max(W, 50.0 / M);
        if (far > W) {
            numerics::QuadOptions qo;
            qo.abs_tol = 1e-13;
            auto f = [&](double t) { return melnikov::integrand(t, s, b); };
            tails = numerics::quad_adaptive(f, -far, -W, qo).value + numerics::quad_adaptive(f, W, far, qo).value;
        }
        r.ratio = r.delta_f / eps;
        r.oracle = (unstable[5] - stable[5]) / eps + tails;
    } else {
        r.ratio = kNaN;
        r.oracle = kNaN;
    }
    return r;
}

double PoincareResult::f_spread() const {
    if (points.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const SectionPoint& a, const SectionPoint& b) { return a.F < b.F; });
    return hi->F - lo->F;
}

double PoincareResult::casimir_spread() const {
    if (points.empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(), [](const SectionPoint& a, const SectionPoint& b) {
        return a.casimir < b.casimir;
    });
    return hi->casimir - lo->casimir;
}

PoincareResult poincare_section(double eps, const State& x0, double section_angle, std::size_t n,
                                const IntegratorConfig& cfg, double max_time) {
    require_finite(eps, "poincare_section eps");
    require_finite(x0, "poincare_section x0");
    require_finite(section_angle, "poincare_section angle");
    if (eps < 0.0) throw DomainError("poincare_section: eps must be >= 0");
    PoincareResult out;
    if (n == 0) {
        out.complete = true;
        return out;
    }
    const double horizon = max_time > 0.0 ? max_time : 4.0 * kTwoPi * static_cast<double>(n) + 100.0;
    const double cs = std::cos(section_angle);
    const double sn = std::sin(section_angle);
    // sqrt(2I) sin(theta - theta*) and sqrt(2I) cos(theta - theta*).
    const geometry::ScalarField event{"section", [cs, sn](const State& p) { return p[4] * cs - p[3] * sn; }, {}};
    auto along = [cs, sn](const State& p) { return p[3] * cs + p[4] * sn; };
    const numerics::VectorField field = transformed_field(eps);

    bool have_prev = false;
    double t_prev = 0.0;
    State x_prev{};
    auto observer = [&](double t, const State& x) {
        if (have_prev) {
            const double g0 = event(x_prev);
            const double g1 = event(x);
            const bool up = g0 < 0.0 && g1 >= 0.0;
            const bool down = g0 > 0.0 && g1 <= 0.0;
            if ((up || down) && along(x) > 0.0 && along(x_prev) > 0.0) {
                if (down) {
                    ++out.reverse_crossings;
                } else {
                    const double radius = std::sqrt(std::fmax(x[3] * x[3] + x[4] * x[4], 0.0));
                    const double tol = 1e-11 * std::fmin(1.0, radius);
                    const numerics::Crossing c =
                        numerics::refine_crossing_segment(field, t_prev, x_prev, t, x, event, cfg, tol);
                    const analytic::ActionAngle aa = analytic::cart_to_action_angle(c.state[3], c.state[4]);
                    SectionPoint sp;
                    sp.t = c.t;
                    sp.mu1 = c.state[0];
                    sp.mu2 = c.state[1];
                    sp.mu3 = c.state[2];
                    sp.action = aa.action;
                    sp.F = models::lie_poisson_energy(c.state);
                    sp.casimir = models::casimir(c.state);
                    if (aa.angle) {
                        double d = std::remainder(*aa.angle - section_angle, kTwoPi);
                        sp.theta_error = std::fabs(d);
                    }
                    out.points.push_back(sp);
                }
            }
        }
        have_prev = true;
        t_prev = t;
        x_prev = x;
        return out.points.size() < n;
    };
    State y = x0;
    double t = 0.0;
    out.status = numerics::integrate_n<kDim>(field, y, t, horizon, cfg, observer);
    out.complete = out.points.size() >= n;
    return out;
}

LyapunovEstimate lyapunov_mle(double eps, const State& x0, const LyapunovParams& params, const IntegratorConfig& cfg) {
    require_finite(eps, "lyapunov_mle eps");
    require_finite(x0, "lyapunov_mle x0");
    if (!(params.renorm_interval > 0.0) || !(params.total_time >= params.renorm_interval))
        throw ConfigError("lyapunov_mle: need total_time >= renorm_interval > 0");
    if (!(params.delta0 > 0.0) || !(params.delta0 < 1.0)) throw ConfigError("lyapunov_mle: delta0 must be in (0, 1)");

    LyapunovEstimate est;
    est.params = params;

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec5 dir{};
    double norm = 0.0;
    while (norm < 1e-3) {
        for (double& d : dir) d = normal(rng);
        norm = norm2(dir);
    }

    using Pair = numerics::VecN<10>;
    auto rhs = [eps](const Pair& y) {
        const Vec5 a = models::transformed_rhs({y[0], y[1], y[2], y[3], y[4]}, eps);
        const Vec5 b = models::transformed_rhs({y[5], y[6], y[7], y[8], y[9]}, eps);
        return Pair{a[0], a[1], a[2], a[3], a[4], b[0], b[1], b[2], b[3], b[4]};
    };

    Pair y{};
    for (std::size_t i = 0; i < kDim; ++i) {
        y[i] = x0[i];
        y[i + kDim] = x0[i] + params.delta0 * dir[i] / norm;
    }

    const auto intervals = static_cast<std::size_t>(std::floor(params.total_time / params.renorm_interval + 1e-9));
    double log_sum = 0.0;
    double t = 0.0;
    for (std::size_t n = 1; n <= intervals; ++n) {
        const double t_next = static_cast<double>(n) * params.renorm_interval;
        const IntegrationStatus st = numerics::propagate_n<10>(rhs, y, t, t_next, cfg);
        if (st != IntegrationStatus::Ok) {
            est.status = st;
            break;
        }
        double d2 = 0.0;
        for (std::size_t i = 0; i < kDim; ++i) d2 += (y[i + kDim] - y[i]) * (y[i + kDim] - y[i]);
        const double d = std::sqrt(d2);
        if (!(d > 0.0) || !std::isfinite(d)) {
            est.collapsed = true;
            break;
        }
        log_sum += std::log(d / params.delta0);
        for (std::size_t i = 0; i < kDim; ++i) y[i + kDim] = y[i] + (y[i + kDim] - y[i]) * (params.delta0 / d);
        est.times.push_back(t_next);
        est.series.push_back(log_sum / t_next);
    }
    if (!est.series.empty()) {
        est.lambda_max = est.series.back();
        const std::size_t from = est.series.size() - std::max<std::size_t>(1, est.series.size() / 5);
        auto [lo, hi] = std::minmax_element(est.series.begin() + static_cast<std::ptrdiff_t>(from), est.series.end());
        est.tail_variation = *hi - *lo;
    } else {
        est.lambda_max = kNaN;
    }
    return est;
}

std::string to_string(SweepTask t) {
    switch (t) {
    case SweepTask::None: return "none";
    case SweepTask::MelnikovAmplitude: return "melnikov";
    case SweepTask::DeltaF: return "deltaf";
    case SweepTask::Lyapunov: return "lyapunov";
    }
    return "none";
}

SweepTask parse_sweep_task(const std::string& name) {
    if (name == "none") return SweepTask::None;
    if (name == "melnikov") return SweepTask::MelnikovAmplitude;
    if (name == "deltaf") return SweepTask::DeltaF;
    if (name == "lyapunov") return SweepTask::Lyapunov;
    throw ConfigError("unknown sweep task '" + name + "' (expected none, melnikov, deltaf or lyapunov)");
}

void SweepGrid::validate() const {
    auto check = [](const std::vector<double>& v, const char* name) {
        if (v.empty()) throw ConfigError(std::string("sweep grid dimension '") + name + "' is empty");
        for (double x : v)
            if (!std::isfinite(x)) throw ConfigError(std::string("sweep grid dimension '") + name + "' has non-finite entries");
    };
    check(eps, "eps");
    check(M, "M");
    check(k, "k");
    check(theta0, "theta0");
}

std::vector<std::string> sweep_columns(SweepTask task) {
    switch (task) {
    case SweepTask::None: return {};
    case SweepTask::MelnikovAmplitude: return {"amplitude", "numeric", "closed", "abs_err"};
    case SweepTask::DeltaF: return {"delta_f_over_eps", "prediction", "oracle", "abs_err", "window"};
    case SweepTask::Lyapunov: return {"lambda_max", "tail_variation"};
    }
    return {};
}

SweepTable sweep(const SweepGrid& grid, const SweepOptions& opt) {
    grid.validate();
    SweepTable table;
    table.task = grid.task;
    table.columns = sweep_columns(grid.task);
    table.rows.resize(grid.cells());

    const std::size_t nt = grid.theta0.size(), nk = grid.k.size(), nm = grid.M.size();
    for (std::size_t idx = 0; idx < table.rows.size(); ++idx) {
        SweepRow& row = table.rows[idx];
        row.theta0 = grid.theta0[idx % nt];
        row.k = grid.k[(idx / nt) % nk];
        row.M = grid.M[(idx / (nt * nk)) % nm];
        row.eps = grid.eps[idx / (nt * nk * nm)];
        row.values.assign(table.columns.size(), kNaN);
    }

    parallel_for(table.rows.size(), opt.threads, [&](std::size_t idx) {
        SweepRow& row = table.rows[idx];
        try {
            const MelnikovSetup setup(row.M, row.k, row.theta0);
            switch (grid.task) {
            case SweepTask::None: break;
            case SweepTask::MelnikovAmplitude: {
                const auto v = melnikov::melnikov_numeric(setup, opt.branch, opt.quad);
                const double closed = melnikov::melnikov_closed(setup, opt.branch);
                row.values = {melnikov::closed_zero_slope(setup), v.value, closed, std::fabs(v.value - closed)};
                if (!v.converged) row.status = "quadrature-not-converged";
                break;
            }
            case SweepTask::DeltaF: {
                const DeltaFResult r = delta_f_experiment(row.eps, setup, opt.branch, opt.deltaf_T, opt.integrator);
                row.values = {r.ratio, r.prediction, r.oracle, std::fabs(r.ratio - r.prediction), r.window};
                if (!r.ok()) row.status = r.shadowing ? numerics::to_string(r.status) : "lost-shadowing";
                break;
            }
            case SweepTask::Lyapunov: {
                const LyapunovEstimate e =
                    lyapunov_mle(row.eps, separatrix_seed(setup, opt.branch), opt.lyapunov, opt.integrator);
                row.values = {e.lambda_max, e.tail_variation};
                if (!e.ok()) row.status = e.collapsed ? "separation-collapsed" : numerics::to_string(e.status);
                break;
            }
            }
        } catch (const std::exception& ex) {
            row.status = std::string("error: ") + ex.what();
        }
    });
    return table;
}

} // namespace lorenz5::diagnostics
