#include "cli.h"

#include "report.h"
#include "version.h"

#include "lorenz5/analytic.h"
#include "lorenz5/diagnostics.h"
#include "lorenz5/geometry.h"
#include "lorenz5/melnikov.h"
#include "lorenz5/models.h"
#include "lorenz5/numerics.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>

namespace lorenz5::cli {

namespace {

using json = nlohmann::ordered_json;
using Config = std::vector<std::pair<std::string, std::string>>;

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_real(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError(what + ": cannot parse '" + text + "' as a number");
    }
    if (used != t.size()) throw ConfigError(what + ": trailing characters in '" + text + "'");
    return v;
}

std::string num(double v) {
    return format_number(v);
}

struct Options {
    std::string command;
    double eps = 0.0;
    double M = 1.0;
    double k = 0.5;
    std::string theta0 = "0";
    std::string branch = "+++";
    double T = 0.0;
    double rtol = 1e-12;
    double atol = 1e-12;
    std::string method = "dp45";
    double h = 1e-3;
    std::size_t max_steps = 20'000'000;
    std::string grid;
    std::string out = "-";
    std::string format = "csv";
    std::uint64_t seed = 20020308;
    std::string config;

    double tol = 0.0;
    double qtol = 1e-10;
    std::size_t points = 1000;
    bool inject_fault = false;
    double t0 = -10.0;
    double t1 = 0.0;
    std::string x0;
    std::string chart = "mu";
    bool compare = false;
    std::string seed_kind = "separatrix";
    double total_time = 2000.0;
    double renorm = 1.0;
    double delta0 = 1e-8;
    std::string section = "0";
    std::size_t crossings = 200;
    std::string task = "none";
    std::string eps_values;
    std::string M_values;
    std::string k_values;
    unsigned threads = 1;

    // Set-by-user markers for options whose default depends on the command.
    bool has_eps = false;
    bool has_T = false;
    bool has_tol = false;
    bool has_t1 = false;
    bool has_grid = false;
    bool has_x0 = false;
    bool has_eps_values = false;
    bool has_M_values = false;
    bool has_k_values = false;
};

/// Everything resolved from the options before any computation starts.
/// Construction errors are configuration errors (exit 2).
struct Resolved {
    Format format = Format::Csv;
    numerics::IntegratorConfig integrator;
    analytic::HeteroclinicBranch branch;
    double theta0 = 0.0;
};

Resolved resolve_common(const Options& o) {
    Resolved r;
    r.format = parse_format(o.format);
    r.integrator.method = numerics::parse_method(o.method);
    r.integrator.step = o.h;
    r.integrator.rtol = o.rtol;
    r.integrator.atol = o.atol;
    r.integrator.max_steps = o.max_steps;
    r.integrator.validate();
    r.branch = analytic::HeteroclinicBranch::parse(o.branch);
    r.theta0 = parse_angle(o.theta0);
    if (!std::isfinite(o.eps)) throw ConfigError("--eps must be finite");
    if (o.threads == 0) throw ConfigError("--threads must be >= 1");
    return r;
}

Config common_config(const Options& o, const Resolved& r) {
    Config c{{"eps", num(o.eps)},
             {"M", num(o.M)},
             {"k", num(o.k)},
             {"theta0", num(r.theta0)},
             {"branch", r.branch.to_string()},
             {"method", numerics::to_string(r.integrator.method)}};
    if (r.integrator.method == numerics::Method::Rk4)
        c.emplace_back("h", num(r.integrator.step));
    else {
        c.emplace_back("rtol", num(r.integrator.rtol));
        c.emplace_back("atol", num(r.integrator.atol));
    }
    c.emplace_back("max-steps", std::to_string(r.integrator.max_steps));
    c.emplace_back("seed", std::to_string(o.seed));
    return c;
}

/// Output sink: stdout for "-", otherwise a file opened before any work.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
            os_ = file_.get();
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

State parse_state(const std::string& text) {
    const std::vector<double> v = parse_list(text);
    if (v.size() != kDim) throw ConfigError("--x0 needs 5 comma-separated values");
    State s{};
    std::copy(v.begin(), v.end(), s.begin());
    require_finite(s, "--x0");
    return s;
}

struct Check {
    std::string name;
    double residual;
    double threshold;
    bool pass() const { return residual <= threshold; }
};

/// Runs the computing part of a command. Any exception becomes a failure
/// marker; whatever was collected so far is still written.
template <class Body>
int execute(Report& report, Sink& sink, Format format, std::ostream& err, Body&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report.fail(e.what());
    }
    report.write(sink.stream(), format);
    if (report.failed()) {
        err << "lorenz5: " << report.failure() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    if (o.points == 0) throw ConfigError("--points must be >= 1");
    std::vector<double> eps_list{0.0, 0.1, 1.0};
    if (o.has_eps && std::find(eps_list.begin(), eps_list.end(), o.eps) == eps_list.end()) eps_list.push_back(o.eps);

    Config cfg{{"points", std::to_string(o.points)},
               {"seed", std::to_string(o.seed)},
               {"inject-fault", o.inject_fault ? "true" : "false"}};
    std::string eps_text;
    for (double e : eps_list) eps_text += (eps_text.empty() ? "" : ",") + num(e);
    cfg.emplace_back("eps-values", eps_text);
    Sink sink(o.out, out);
    Report report("verify", cfg);
    return execute(report, sink, r.format, err, [&] {
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> coord(-5.0, 5.0);
        std::vector<State> pts(o.points);
        for (auto& p : pts)
            for (auto& v : p) v = coord(rng);
        const std::size_t jacobi_points = std::min<std::size_t>(o.points, 100);

        const geometry::PoissonStructure s2 = geometry::se2_r2_structure();
        geometry::PoissonStructure s1 = geometry::r5_structure();
        if (o.inject_fault) s1 = geometry::with_flipped_entry(s1, 1, 2);
        const geometry::ScalarField c_field = models::casimir_field();
        const geometry::ScalarField h_r5 = models::hamiltonian_r5_field();

        double anti1 = 0.0, anti2 = 0.0, jac1 = 0.0, jac2 = 0.0, cas1 = 0.0, cas2 = 0.0;
        double push = 0.0, hvf1 = 0.0, hvf2 = 0.0, energy = 0.0, roundtrip = 0.0;
        for (double eps : eps_list) {
            const geometry::ScalarField h_eps = models::hamiltonian_eps_field(eps);
            for (std::size_t n = 0; n < pts.size(); ++n) {
                const State& x = pts[n];
                anti1 = std::fmax(anti1, geometry::antisymmetry_defect(s1.matrix(x, eps)));
                anti2 = std::fmax(anti2, geometry::antisymmetry_defect(s2.matrix(x, eps)));
                if (n < jacobi_points) {
                    for (std::size_t i = 0; i < kDim; ++i)
                        for (std::size_t j = 0; j < kDim; ++j)
                            for (std::size_t l = 0; l < kDim; ++l) {
                                if (i == j || j == l || i == l) continue;
                                jac1 = std::fmax(jac1, std::fabs(geometry::jacobi_residual(s1, x, i, j, l, eps)));
                                jac2 = std::fmax(jac2, std::fabs(geometry::jacobi_residual(s2, x, i, j, l, eps)));
                            }
                }
                cas1 = std::fmax(cas1, norm_inf(geometry::casimir_residual(s1, c_field, x, eps)));
                cas2 = std::fmax(cas2, norm_inf(geometry::casimir_residual(s2, c_field, x, eps)));
                push = std::fmax(push, norm_inf(models::pushforward_residual(x, eps)));
                hvf1 = std::fmax(hvf1, norm_inf(sub(geometry::hamiltonian_vector_field(s1, h_r5, x, eps),
                                                    models::lorenz5_rhs(x, eps))));
                hvf2 = std::fmax(hvf2, norm_inf(sub(geometry::hamiltonian_vector_field(s2, h_eps, x, eps),
                                                    models::transformed_rhs(x, eps))));
                const double hx = models::hamiltonian_r5(x);
                energy = std::fmax(energy, std::fabs(models::hamiltonian_eps(models::phi(x, eps), eps) - hx) /
                                               std::fmax(1.0, std::fabs(hx)));
                const State back = models::phi_inv(models::phi(x, eps), eps);
                roundtrip = std::fmax(roundtrip, norm_inf(sub(back, x)) / std::fmax(1.0, norm_inf(x)));
            }
        }

        const std::vector<Check> checks{
            {"antisymmetry_J1", anti1, 0.0},
            {"antisymmetry_J2", anti2, 0.0},
            {"jacobi_J1", jac1, 1e-10},
            {"jacobi_J2", jac2, 1e-10},
            {"casimir_J1", cas1, 1e-12},
            {"casimir_J2", cas2, 1e-12},
            {"pushforward", push, 1e-12},
            {"hamiltonian_rhs_x_chart", hvf1, 1e-12},
            {"hamiltonian_rhs_mu_chart", hvf2, 1e-12},
            {"energy_pullback", energy, 1e-12},
            {"chart_roundtrip", roundtrip, 4.0 * std::numeric_limits<double>::epsilon()},
        };
        Table& table = report.add_table("checks", {"check", "max_residual", "threshold", "pass"});
        std::string failed;
        for (const Check& c : checks) {
            table.rows.push_back({c.name, c.residual, c.threshold, c.pass()});
            if (!c.pass()) failed += (failed.empty() ? "" : ",") + c.name;
        }
        report.set_result("all_pass", failed.empty());
        if (!failed.empty()) report.fail("checks failed: " + failed);
    });
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    const bool x_chart = o.chart == "x";
    if (!x_chart && o.chart != "mu") throw ConfigError("--chart must be 'mu' or 'x'");
    const double duration = o.has_T ? o.T : 20.0;
    const double t1 = o.has_t1 ? o.t1 : o.t0 + duration;
    if (!std::isfinite(o.t0) || !std::isfinite(t1)) throw ConfigError("time span must be finite");
    const double threshold = o.has_tol ? o.tol : 1e-6;
    const analytic::MelnikovSetup setup(o.M, o.k, r.theta0);

    State seed = o.has_x0 ? parse_state(o.x0) : analytic::unperturbed_orbit(o.t0, setup, r.branch).state;
    if (x_chart && !o.has_x0) seed = models::phi_inv(seed, o.eps);

    Config cfg = common_config(o, r);
    cfg.emplace_back("chart", o.chart);
    cfg.emplace_back("t0", num(o.t0));
    cfg.emplace_back("t1", num(t1));
    cfg.emplace_back("x0", o.has_x0 ? o.x0 : "heteroclinic");
    cfg.emplace_back("compare", o.compare ? "true" : "false");
    if (o.compare) cfg.emplace_back("tol", num(threshold));
    Sink sink(o.out, out);
    Report report("simulate", cfg);
    return execute(report, sink, r.format, err, [&] {
        const double eps = o.eps;
        numerics::VectorField f;
        std::vector<geometry::ScalarField> tracked;
        if (x_chart) {
            f = [eps](const State& x) { return models::lorenz5_rhs(x, eps); };
            tracked = {models::hamiltonian_r5_field(), models::casimir_field()};
        } else {
            f = [eps](const State& p) { return models::transformed_rhs(p, eps); };
            tracked = {models::hamiltonian_eps_field(eps), models::casimir_field(), models::lie_poisson_energy_field(),
                       models::oscillator_action_field()};
        }
        const numerics::Trajectory traj = numerics::integrate(f, seed, o.t0, t1, r.integrator, tracked);

        std::vector<std::string> cols{"t"};
        for (const char* n : x_chart ? std::vector<const char*>{"x1", "x2", "x3", "x4", "x5"}
                                     : std::vector<const char*>{"mu1", "mu2", "mu3", "u1", "u2"})
            cols.emplace_back(n);
        for (const auto& s : traj.tracked) cols.push_back(s.name);
        if (o.compare) cols.emplace_back("deviation");
        Table& table = report.add_table("trajectory", cols);

        double max_dev = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) {
            std::vector<json> row{traj.times[i]};
            for (double v : traj.states[i]) row.emplace_back(v);
            for (const auto& s : traj.tracked) row.emplace_back(s.values[i]);
            if (o.compare) {
                State ref = analytic::unperturbed_orbit(traj.times[i], setup, r.branch).state;
                if (x_chart) ref = models::phi_inv(ref, eps);
                const double d = norm_inf(sub(traj.states[i], ref));
                max_dev = std::fmax(max_dev, d);
                row.emplace_back(d);
            }
            table.rows.push_back(std::move(row));
        }
        report.set_result("status", numerics::to_string(traj.status));
        report.set_result("steps", traj.size() == 0 ? 0 : traj.size() - 1);
        for (const auto& s : traj.tracked) report.set_result("drift_" + s.name, traj.drift(s.name));
        if (o.compare) report.set_result("max_deviation", max_dev);

        if (!traj.ok())
            report.fail("integration stopped: " + numerics::to_string(traj.status));
        else if (o.compare && !(max_dev < threshold))
            report.fail("deviation from closed form " + num(max_dev) + " exceeds " + num(threshold));
    });
}

// ---------------------------------------------------------------- melnikov

int cmd_melnikov(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    const analytic::MelnikovSetup setup(o.M, o.k, r.theta0);
    const std::vector<double> grid = parse_grid(o.has_grid ? o.grid : "0:2pi:128");
    if (grid.size() < 2) throw ConfigError("--grid needs at least two points");
    const double tol = o.has_tol ? o.tol : 1e-8;
    melnikov::QuadConfig quad;
    quad.T = o.has_T ? o.T : 0.0;
    quad.abs_tol = o.qtol;
    if (!(quad.abs_tol > 0.0)) throw ConfigError("--qtol must be positive");
    if (o.has_T && !(o.T > 0.0 && std::isfinite(o.T))) throw ConfigError("--T must be positive");

    Config cfg{{"M", num(o.M)},
               {"k", num(o.k)},
               {"branch", r.branch.to_string()},
               {"grid", o.has_grid ? o.grid : "0:2pi:128"},
               {"T", num(quad.truncation(o.M))},
               {"qtol", num(quad.abs_tol)},
               {"tol", num(tol)},
               {"threads", std::to_string(o.threads)}};
    Sink sink(o.out, out);
    Report report("melnikov", cfg);
    return execute(report, sink, r.format, err, [&] {
        const melnikov::MelnikovProfile profile = melnikov::build_profile(setup, r.branch, grid, quad, o.threads);
        Table& rows = report.add_table("profile", {"theta0", "numeric", "closed", "abs_err"});
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows.rows.push_back(
                {grid[i], profile.numeric[i], profile.closed[i], std::fabs(profile.numeric[i] - profile.closed[i])});

        const melnikov::ZeroSearch zs = melnikov::find_zeros(profile);
        Table& zeros = report.add_table("zeros", {"theta0_star", "derivative", "simple"});
        bool all_simple = true;
        for (const auto& z : zs.zeros) {
            zeros.rows.push_back({z.theta0, z.derivative, z.simple});
            all_simple = all_simple && z.simple;
        }
        const double err_max = profile.max_abs_error();
        report.set_result("max_abs_err", err_max);
        report.set_result("quadrature_converged", profile.all_converged);
        report.set_result("zero_count", zs.zeros.size());
        report.set_result("expected_zero_slope", melnikov::closed_zero_slope(setup));
        report.set_result("degenerate", zs.degenerate);
        if (zs.degenerate) report.set_result("note", "profile identically zero; no simple zeros to locate");

        if (!profile.all_converged)
            report.fail("quadrature did not converge on every grid point");
        else if (!(err_max < tol))
            report.fail("max abs_err " + num(err_max) + " exceeds " + num(tol));
        else if (!zs.degenerate && !all_simple)
            report.fail("non-simple zero found");
    });
}

// ---------------------------------------------------------------- deltaf

int cmd_deltaf(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    const double eps = o.has_eps ? o.eps : 1e-3;
    if (!(eps >= 0.0)) throw ConfigError("--eps must be >= 0 for deltaf");
    const analytic::MelnikovSetup setup(o.M, o.k, 0.0);
    const std::string grid_text = o.has_grid ? o.grid : "0:2pi:16";
    const std::vector<double> grid = parse_grid(grid_text);
    const double T = o.has_T ? o.T : 30.0;
    if (!(T > 0.0 && std::isfinite(T))) throw ConfigError("--T must be positive");
    const double tol = o.has_tol ? o.tol : 0.05;
    if (eps > 0.0) melnikov::fit_harmonic(grid, std::vector<double>(grid.size(), 0.0));

    Config cfg = common_config(o, r);
    cfg[0].second = num(eps);
    cfg.emplace_back("grid", grid_text);
    cfg.emplace_back("T", num(T));
    cfg.emplace_back("tol", num(tol));
    Sink sink(o.out, out);
    Report report("deltaf", cfg);
    return execute(report, sink, r.format, err, [&] {
        Table& table = report.add_table(
            "phases", {"theta0", "delta_f", "ratio", "oracle", "prediction", "window", "shadowing", "status"});
        std::vector<double> ratios;
        bool all_ok = true;
        double max_abs = 0.0;
        for (double th : grid) {
            const diagnostics::DeltaFResult d =
                diagnostics::delta_f_experiment(eps, setup.with_theta0(th), r.branch, T, r.integrator);
            table.rows.push_back(
                {th, d.delta_f, d.ratio, d.oracle, d.prediction, d.window, d.shadowing, numerics::to_string(d.status)});
            ratios.push_back(d.ratio);
            all_ok = all_ok && d.ok();
            max_abs = std::fmax(max_abs, std::fabs(d.delta_f));
        }

        const double predicted = melnikov::melnikov_closed(setup, r.branch) / setup.omega();
        report.set_result("predicted_A", predicted);
        if (!all_ok) {
            report.fail("integration failed or left the separatrix on some phase");
        } else if (eps == 0.0) {
            report.set_result("max_abs_delta_f", max_abs);
            if (!(max_abs < 1e-10)) report.fail("nonzero splitting at eps = 0");
        } else {
            const melnikov::HarmonicFit fit = melnikov::fit_harmonic(grid, ratios);
            const double dev = std::fabs(fit.A - predicted);
            const double rel = predicted != 0.0 ? dev / std::fabs(predicted) : dev;
            report.set_result("fitted_A", fit.A);
            report.set_result("fitted_B", fit.B);
            report.set_result("fit_rms_residual", fit.rms_residual);
            report.set_result("relative_error_A", rel);
            if (!(rel <= tol)) report.fail("fitted amplitude off by " + num(rel) + " (tolerance " + num(tol) + ")");
        }
    });
}

// ---------------------------------------------------------------- lyapunov / poincare

State chaos_seed(const Options& o, const analytic::MelnikovSetup& setup, const Resolved& r) {
    if (o.has_x0) return parse_state(o.x0);
    if (o.seed_kind == "separatrix") return diagnostics::separatrix_seed(setup, r.branch);
    if (o.seed_kind == "regular") return diagnostics::regular_seed(setup);
    throw ConfigError("--seed-kind must be 'separatrix' or 'regular'");
}

int cmd_lyapunov(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    const double eps = o.has_eps ? o.eps : 0.1;
    const analytic::MelnikovSetup setup(o.M, o.k, r.theta0);
    const State x0 = chaos_seed(o, setup, r);
    diagnostics::LyapunovParams lp;
    lp.total_time = o.total_time;
    lp.renorm_interval = o.renorm;
    lp.delta0 = o.delta0;
    lp.seed = o.seed;
    if (!(lp.total_time >= lp.renorm_interval && lp.renorm_interval > 0.0 && lp.delta0 > 0.0 && lp.delta0 < 1.0) ||
        !std::isfinite(lp.total_time))
        throw ConfigError("need --total-time >= --renorm > 0 and 0 < --delta0 < 1");

    Config cfg = common_config(o, r);
    cfg[0].second = num(eps);
    cfg.emplace_back("seed-kind", o.has_x0 ? "x0" : o.seed_kind);
    if (o.has_x0) cfg.emplace_back("x0", o.x0);
    cfg.emplace_back("total-time", num(lp.total_time));
    cfg.emplace_back("renorm", num(lp.renorm_interval));
    cfg.emplace_back("delta0", num(lp.delta0));
    Sink sink(o.out, out);
    Report report("lyapunov", cfg);
    return execute(report, sink, r.format, err, [&] {
        const diagnostics::LyapunovEstimate est = diagnostics::lyapunov_mle(eps, x0, lp, r.integrator);
        Table& table = report.add_table("series", {"t", "lambda"});
        for (std::size_t i = 0; i < est.times.size(); ++i) table.rows.push_back({est.times[i], est.series[i]});
        report.set_result("lambda_max", est.lambda_max);
        report.set_result("tail_variation", est.tail_variation);
        report.set_result("collapsed", est.collapsed);
        report.set_result("status", numerics::to_string(est.status));
        if (!est.ok())
            report.fail(est.collapsed ? "separation collapsed to zero"
                                      : "integration stopped: " + numerics::to_string(est.status));
    });
}

int cmd_poincare(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    const double eps = o.has_eps ? o.eps : 0.1;
    const analytic::MelnikovSetup setup(o.M, o.k, r.theta0);
    const State x0 = chaos_seed(o, setup, r);
    const double section = parse_angle(o.section);
    if (o.crossings == 0) throw ConfigError("--crossings must be >= 1");
    const double max_time = o.has_T ? o.T : 0.0;

    Config cfg = common_config(o, r);
    cfg[0].second = num(eps);
    cfg.emplace_back("seed-kind", o.has_x0 ? "x0" : o.seed_kind);
    if (o.has_x0) cfg.emplace_back("x0", o.x0);
    cfg.emplace_back("section", num(section));
    cfg.emplace_back("crossings", std::to_string(o.crossings));
    cfg.emplace_back("T", max_time > 0.0 ? num(max_time) : "auto");
    Sink sink(o.out, out);
    Report report("poincare", cfg);
    return execute(report, sink, r.format, err, [&] {
        const diagnostics::PoincareResult pr =
            diagnostics::poincare_section(eps, x0, section, o.crossings, r.integrator, max_time);
        Table& table =
            report.add_table("section", {"index", "t", "mu1", "mu2", "mu3", "I", "F", "casimir", "theta_error"});
        for (std::size_t i = 0; i < pr.points.size(); ++i) {
            const auto& p = pr.points[i];
            table.rows.push_back({i, p.t, p.mu1, p.mu2, p.mu3, p.action, p.F, p.casimir, p.theta_error});
        }
        report.set_result("points", pr.points.size());
        report.set_result("f_spread", pr.f_spread());
        report.set_result("casimir_spread", pr.casimir_spread());
        report.set_result("reverse_crossings", pr.reverse_crossings);
        report.set_result("status", numerics::to_string(pr.status));
        if (pr.status != numerics::IntegrationStatus::Ok)
            report.fail("integration stopped: " + numerics::to_string(pr.status));
        else if (!pr.complete)
            report.fail("only " + std::to_string(pr.points.size()) + " crossings before the time limit");
    });
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_common(o);
    diagnostics::SweepGrid grid;
    grid.task = diagnostics::parse_sweep_task(o.task);
    grid.eps = o.has_eps_values ? parse_list(o.eps_values) : std::vector<double>{o.eps};
    grid.M = o.has_M_values ? parse_list(o.M_values) : std::vector<double>{o.M};
    grid.k = o.has_k_values ? parse_list(o.k_values) : std::vector<double>{o.k};
    grid.theta0 = o.has_grid ? parse_grid(o.grid) : std::vector<double>{r.theta0};
    grid.validate();

    diagnostics::SweepOptions so;
    so.integrator = r.integrator;
    so.quad.abs_tol = o.qtol;
    so.lyapunov.total_time = o.total_time;
    so.lyapunov.renorm_interval = o.renorm;
    so.lyapunov.delta0 = o.delta0;
    so.lyapunov.seed = o.seed;
    so.branch = r.branch;
    so.deltaf_T = o.has_T ? o.T : 30.0;
    so.threads = o.threads;

    auto list_text = [](const std::vector<double>& v) {
        std::string s;
        for (double x : v) s += (s.empty() ? "" : ",") + num(x);
        return s;
    };
    Config cfg{{"task", diagnostics::to_string(grid.task)},
               {"eps-values", list_text(grid.eps)},
               {"M-values", list_text(grid.M)},
               {"k-values", list_text(grid.k)},
               {"theta0-values", list_text(grid.theta0)},
               {"branch", r.branch.to_string()},
               {"method", numerics::to_string(r.integrator.method)},
               {"rtol", num(r.integrator.rtol)},
               {"atol", num(r.integrator.atol)},
               {"qtol", num(so.quad.abs_tol)},
               {"T", num(so.deltaf_T)},
               {"total-time", num(so.lyapunov.total_time)},
               {"seed", std::to_string(o.seed)},
               {"threads", std::to_string(o.threads)}};
    Sink sink(o.out, out);
    Report report("sweep", cfg);
    return execute(report, sink, r.format, err, [&] {
        const diagnostics::SweepTable t = diagnostics::sweep(grid, so);
        std::vector<std::string> cols{"eps", "M", "k", "theta0"};
        cols.insert(cols.end(), t.columns.begin(), t.columns.end());
        cols.emplace_back("status");
        Table& table = report.add_table("cells", cols);
        std::size_t failures = 0;
        for (const auto& row : t.rows) {
            std::vector<json> cells{row.eps, row.M, row.k, row.theta0};
            for (double v : row.values) cells.emplace_back(v);
            cells.emplace_back(row.status);
            table.rows.push_back(std::move(cells));
            if (row.status != "ok") ++failures;
        }
        report.set_result("cells", t.rows.size());
        report.set_result("failed_cells", failures);
        if (failures > 0) report.fail(std::to_string(failures) + " cell(s) failed");
    });
}

const std::vector<std::string> kCommands{"verify", "simulate", "melnikov", "deltaf", "lyapunov", "poincare", "sweep"};

bool is_command(const std::string& s) { return std::find(kCommands.begin(), kCommands.end(), s) != kCommands.end(); }

/// Config-file tokens to place before the command line. A command named on
/// the command line replaces one given in the file.
std::vector<std::string> config_tokens(const std::vector<std::string>& args) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file name");
            tokens = read_config_file(args[i + 1]);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            tokens = read_config_file(args[i].substr(9));
            break;
        }
    }
    if (std::any_of(args.begin(), args.end(), is_command)) std::erase_if(tokens, is_command);
    return tokens;
}

} // namespace

double parse_angle(const std::string& text) {
    const std::string t = trim(text);
    const std::size_t p = t.find("pi");
    if (p == std::string::npos) return parse_real(t, "angle");
    std::string coef = trim(t.substr(0, p));
    if (!coef.empty() && coef.back() == '*') coef = trim(coef.substr(0, coef.size() - 1));
    double c = 1.0;
    if (coef == "-")
        c = -1.0;
    else if (!coef.empty() && coef != "+")
        c = parse_real(coef, "angle");
    std::string rest = trim(t.substr(p + 2));
    double den = 1.0;
    if (!rest.empty()) {
        if (rest[0] != '/') throw ConfigError("angle: cannot parse '" + text + "'");
        den = parse_real(rest.substr(1), "angle");
        if (den == 0.0) throw ConfigError("angle: division by zero in '" + text + "'");
    }
    return c * kPi / den;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("--grid expects start:stop:count, got '" + spec + "'");
    const double a = parse_angle(parts[0]);
    const double b = parse_angle(parts[1]);
    const double cnt = parse_real(parts[2], "grid count");
    if (!std::isfinite(a) || !std::isfinite(b)) throw ConfigError("--grid bounds must be finite");
    if (!(cnt >= 1.0) || cnt != std::floor(cnt) || cnt > 1e7)
        throw ConfigError("--grid count must be a positive integer");
    const auto n = static_cast<std::size_t>(cnt);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    return g;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    if (trim(text).empty()) return v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(parse_angle(item));
    if (!text.empty() && text.back() == ',') throw ConfigError("list ends with a trailing comma: '" + text + "'");
    return v;
}

std::vector<std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(where + ": empty key or value");
        for (char c : key)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_'))
                throw ConfigError(where + ": invalid key '" + key + "'");
        if (key == "config") throw ConfigError(where + ": config files cannot include other config files");
        if (key == "command") {
            tokens.push_back(value);
            continue;
        }
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Lorenz five-component model: Poisson geometry, Melnikov analysis and chaos diagnostics", "lorenz5"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_help_flag("--help", "print this help and exit");
    app.set_version_flag("--version", std::string(kVersion));

    app.add_option("command", o.command, "verify | simulate | melnikov | deltaf | lyapunov | poincare | sweep")
        ->required()
        ->check(CLI::IsMember(kCommands));
    auto* eps = app.add_option("--eps", o.eps, "perturbation parameter epsilon");
    app.add_option("--M", o.M, "separatrix amplitude M (> 0)");
    app.add_option("--k", o.k, "oscillator action k = I (>= 0)");
    app.add_option("--theta0", o.theta0, "oscillator phase (accepts pi forms)");
    app.add_option("--branch", o.branch, "heteroclinic sign triple: +++, +--, -+-, --+");
    auto* T = app.add_option("--T", o.T, "quadrature truncation / experiment window / duration");
    app.add_option("--rtol", o.rtol, "relative tolerance (dp45)");
    app.add_option("--atol", o.atol, "absolute tolerance (dp45)");
    app.add_option("--method", o.method, "rk4 | dp45");
    app.add_option("--h", o.h, "fixed step (rk4)");
    app.add_option("--max-steps", o.max_steps, "step limit per integration");
    auto* grid = app.add_option("--grid", o.grid, "theta0 grid start:stop:count, stop excluded");
    app.add_option("--out", o.out, "output file, '-' for stdout");
    app.add_option("--format", o.format, "csv | json");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--config", o.config, "flat key = value file; flags override it");
    auto* tol = app.add_option("--tol", o.tol, "pass threshold of the command");
    app.add_option("--qtol", o.qtol, "quadrature absolute tolerance");
    app.add_option("--points", o.points, "random points for verify");
    app.add_flag("--inject-fault", o.inject_fault, "flip J23 of the R^5 structure (self-test)");
    app.add_option("--t0", o.t0, "simulate start time");
    auto* t1 = app.add_option("--t1", o.t1, "simulate end time (default t0 + T, T = 20)");
    auto* x0 = app.add_option("--x0", o.x0, "initial state, 5 comma-separated values");
    app.add_option("--chart", o.chart, "mu | x");
    app.add_flag("--compare", o.compare, "compare with the closed-form unperturbed orbit");
    app.add_option("--seed-kind", o.seed_kind, "separatrix | regular");
    app.add_option("--total-time", o.total_time, "Lyapunov integration time");
    app.add_option("--renorm", o.renorm, "Lyapunov renormalization interval");
    app.add_option("--delta0", o.delta0, "Lyapunov initial separation");
    app.add_option("--section", o.section, "Poincare section angle");
    app.add_option("--crossings", o.crossings, "Poincare crossings to collect");
    app.add_option("--task", o.task, "sweep task: none | melnikov | deltaf | lyapunov");
    auto* ev = app.add_option("--eps-values", o.eps_values, "sweep eps list");
    auto* mv = app.add_option("--M-values", o.M_values, "sweep M list");
    auto* kv = app.add_option("--k-values", o.k_values, "sweep k list");
    app.add_option("--threads", o.threads, "worker threads (melnikov, sweep)");

    try {
        std::vector<std::string> all = config_tokens(args);
        all.insert(all.end(), args.begin(), args.end());
        std::vector<char*> argv;
        std::string prog = "lorenz5";
        argv.push_back(prog.data());
        for (auto& a : all) argv.push_back(a.data());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "lorenz5: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConfigError& e) {
        err << "lorenz5: " << e.what() << '\n';
        return kExitConfig;
    }

    o.has_eps = eps->count() > 0;
    o.has_T = T->count() > 0;
    o.has_tol = tol->count() > 0;
    o.has_t1 = t1->count() > 0;
    o.has_grid = grid->count() > 0;
    o.has_x0 = x0->count() > 0;
    o.has_eps_values = ev->count() > 0;
    o.has_M_values = mv->count() > 0;
    o.has_k_values = kv->count() > 0;

    static const std::map<std::string, std::function<int(const Options&, std::ostream&, std::ostream&)>> commands{
        {"verify", cmd_verify},     {"simulate", cmd_simulate}, {"melnikov", cmd_melnikov}, {"deltaf", cmd_deltaf},
        {"lyapunov", cmd_lyapunov}, {"poincare", cmd_poincare}, {"sweep", cmd_sweep}};
    try {
        return commands.at(o.command)(o, out, err);
    } catch (const ConfigError& e) {
        err << "lorenz5: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "lorenz5: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "lorenz5: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace lorenz5::cli
