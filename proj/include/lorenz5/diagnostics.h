#ifndef LORENZ5_DIAGNOSTICS_H
#define LORENZ5_DIAGNOSTICS_H

#include "lorenz5/analytic.h"
#include "lorenz5/melnikov.h"
#include "lorenz5/numerics.h"

#include <cstdint>
#include <string>
#include <vector>

namespace lorenz5::diagnostics {

using analytic::HeteroclinicBranch;
using analytic::MelnikovSetup;
using numerics::IntegratorConfig;
using numerics::IntegrationStatus;

/// Tolerances used when a diagnostic needs F to ~1e-12 (first-order splitting).
IntegratorConfig tight_config();

/// Unperturbed orbit point at t = 0, (M sech 0, 0, M sech 0) for (+,+,+):
/// the canonical seed inside the separatrix layer.
State separatrix_seed(const MelnikovSetup& s, const HeteroclinicBranch& b = {});

/// Regular (center-type) orbit on the same Casimir cylinder with the same
/// unperturbed energy h = M^2 + k: mu = (M, 0, M/2), I = h - F(mu), theta = theta0.
State regular_seed(const MelnikovSetup& s);

/// First-order periodic response of the linearized, harmonically forced saddle
/// at (0, c, 0): the perturbed hyperbolic orbit near that saddle is
/// (0, c, 0) + this offset in (mu1, mu3), with the oscillator phase `phase`.
State saddle_response(double c, double k, double phase, double eps);

struct DeltaFResult {
    /// F on the unstable-manifold leg minus F on the stable-manifold leg, at t = 0.
    double delta_f = 0.0;
    /// delta_f / eps (NaN for eps = 0).
    double ratio = 0.0;
    /// Omega * M(theta0) from the closed form.
    double prediction = 0.0;
    /// Integral of eps {F, H1} accumulated along both legs plus the unperturbed
    /// tails beyond the window, divided by eps (NaN for eps = 0).
    double oracle = 0.0;
    /// Half-width of the integration window actually used.
    double window = 0.0;
    IntegrationStatus status = IntegrationStatus::Ok;
    /// Both legs end within 0.1 M of the unperturbed orbit point at t = 0.
    bool shadowing = true;

    bool ok() const { return status == IntegrationStatus::Ok && shadowing; }
};

/// Measures the first-order splitting of F across the perturbed heteroclinic
/// connection. Two legs are integrated toward t = 0: forward from the unstable
/// manifold of the perturbed saddle orbit at t = -W and backward from the
/// stable manifold at t = +W, each seeded with the unperturbed orbit plus the
/// saddle response. W = min(T, 1.5 ln(1/eps) / M); longer windows let the
/// O(eps^2) seed error grow like exp(M W) and the trajectory leaves the saddle
/// at the wrong time.
DeltaFResult delta_f_experiment(double eps, const MelnikovSetup& s, const HeteroclinicBranch& b, double T,
                                const IntegratorConfig& cfg = tight_config());

struct SectionPoint {
    double t = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double mu3 = 0.0;
    double action = 0.0;
    double F = 0.0;
    double casimir = 0.0;
    double theta_error = 0.0;
};

struct PoincareResult {
    std::vector<SectionPoint> points;
    /// Crossings of theta* with decreasing theta (theta-dot < 0); expected 0.
    std::size_t reverse_crossings = 0;
    IntegrationStatus status = IntegrationStatus::Ok;
    bool complete = false;

    /// max F - min F over the section points.
    double f_spread() const;
    double casimir_spread() const;
};

/// Collects n crossings of the section theta = section_angle (mod 2pi) with
/// increasing theta, each refined to |theta - theta*| < 1e-10. max_time <= 0
/// selects 8 pi n + 100.
PoincareResult poincare_section(double eps, const State& x0, double section_angle, std::size_t n,
                                const IntegratorConfig& cfg = {}, double max_time = 0.0);

struct LyapunovParams {
    double total_time = 2000.0;
    double renorm_interval = 1.0;
    double delta0 = 1e-8;
    std::uint64_t seed = 20020308;
};

struct LyapunovEstimate {
    double lambda_max = 0.0;
    /// Running average after each renormalization.
    std::vector<double> times;
    std::vector<double> series;
    /// max - min of the series over its last fifth.
    double tail_variation = 0.0;
    LyapunovParams params;
    IntegrationStatus status = IntegrationStatus::Ok;
    bool collapsed = false;

    bool ok() const { return status == IntegrationStatus::Ok && !collapsed; }
};

/// Two-trajectory (Benettin) estimate of the largest Lyapunov exponent of the
/// transformed flow. The initial separation direction is drawn from the seeded
/// generator.
LyapunovEstimate lyapunov_mle(double eps, const State& x0, const LyapunovParams& params,
                              const IntegratorConfig& cfg = {});

enum class SweepTask { None, MelnikovAmplitude, DeltaF, Lyapunov };

std::string to_string(SweepTask t);
SweepTask parse_sweep_task(const std::string& name);

struct SweepGrid {
    std::vector<double> eps{0.0};
    std::vector<double> M{1.0};
    std::vector<double> k{0.5};
    std::vector<double> theta0{0.0};
    SweepTask task = SweepTask::None;

    void validate() const;
    std::size_t cells() const { return eps.size() * M.size() * k.size() * theta0.size(); }
};

struct SweepRow {
    double eps = 0.0;
    double M = 0.0;
    double k = 0.0;
    double theta0 = 0.0;
    std::vector<double> values;
    std::string status = "ok";
};

struct SweepTable {
    SweepTask task = SweepTask::None;
    std::vector<std::string> columns;
    /// Cartesian order: eps outermost, then M, k, theta0.
    std::vector<SweepRow> rows;
};

struct SweepOptions {
    IntegratorConfig integrator;
    melnikov::QuadConfig quad;
    LyapunovParams lyapunov;
    HeteroclinicBranch branch;
    double deltaf_T = 30.0;
    unsigned threads = 1;
};

std::vector<std::string> sweep_columns(SweepTask task);

/// Evaluates the task on every grid cell. Cell failures are recorded in the
/// row status and never abort the sweep; row order and contents do not depend
/// on the thread count.
SweepTable sweep(const SweepGrid& grid, const SweepOptions& opt);

} // namespace lorenz5::diagnostics

#endif // LORENZ5_DIAGNOSTICS_H
