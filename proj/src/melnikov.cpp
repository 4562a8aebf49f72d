#include "lorenz5/melnikov.h"

#include "lorenz5/geometry.h"
#include "lorenz5/models.h"
#include "lorenz5/numerics.h"
#include "lorenz5/parallel.h"

#include <cmath>

namespace lorenz5::melnikov {

double integrand(double t, const MelnikovSetup& s, const HeteroclinicBranch& b) {
    const analytic::Mu mu = analytic::heteroclinic(t, s.M(), b);
    return -mu[0] * mu[1] * std::sqrt(2.0 * s.k()) * std::sin(t + s.theta0());
}

double integrand_via_bracket(double t, const MelnikovSetup& s, const HeteroclinicBranch& b) {
    static const geometry::PoissonStructure structure = geometry::se2_r2_structure();
    static const geometry::ScalarField F = models::lie_poisson_energy_field();
    static const geometry::ScalarField H1 = models::perturbation_field();
    const analytic::OrbitPoint p = analytic::unperturbed_orbit(t, s, b);
    return geometry::bracket(structure, F, H1, p.state, 0.0, geometry::GradientPolicy::AnalyticOnly);
}

double tail_bound(const MelnikovSetup& s, double T) {
    const double M = s.M();
    return 2.0 * std::sqrt(2.0 * s.k()) * M * M * (2.0 / M) * std::exp(-M * T);
}

MelnikovValue melnikov_numeric(const MelnikovSetup& s, const HeteroclinicBranch& b, const QuadConfig& q) {
    const double T = q.truncation(s.M());
    MelnikovValue r;
    r.tail_bound = tail_bound(s, T);
    const numerics::QuadResult quad =
        numerics::quad_improper([&](double t) { return integrand(t, s, b); }, T, q.abs_tol);
    r.value = quad.value / s.omega();
    r.error_estimate = quad.error + r.tail_bound;
    r.converged = quad.converged && r.tail_bound <= q.tail_tol;
    return r;
}

double melnikov_closed(const MelnikovSetup& s) {
    return -kPi * std::sqrt(2.0 * s.k()) * sech(kPi / (2.0 * s.M())) * std::cos(s.theta0());
}

double melnikov_closed(const MelnikovSetup& s, const HeteroclinicBranch& b) {
    return b.s3() * melnikov_closed(s);
}

double closed_zero_slope(const MelnikovSetup& s) {
    return kPi * std::sqrt(2.0 * s.k()) * sech(kPi / (2.0 * s.M()));
}

double MelnikovProfile::max_abs_error() const {
    double m = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) m = std::fmax(m, std::fabs(numeric[i] - closed[i]));
    return m;
}

std::vector<double> periodic_grid(std::size_t count) {
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) g[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
    return g;
}

MelnikovProfile build_profile(const MelnikovSetup& s, const HeteroclinicBranch& b, const std::vector<double>& grid,
                              const QuadConfig& q, unsigned threads) {
    MelnikovProfile p{s, b, q, grid, {}, {}, {}, true};
    const std::size_t n = grid.size();
    p.numeric.assign(n, 0.0);
    p.closed.assign(n, 0.0);
    p.error_estimate.assign(n, 0.0);
    std::vector<char> ok(n, 1);
    parallel_for(n, threads, [&](std::size_t i) {
        const MelnikovSetup si = s.with_theta0(grid[i]);
        const MelnikovValue v = melnikov_numeric(si, b, q);
        p.numeric[i] = v.value;
        p.error_estimate[i] = v.error_estimate;
        p.closed[i] = melnikov_closed(si, b);
        ok[i] = v.converged ? 1 : 0;
    });
    for (char c : ok) p.all_converged = p.all_converged && c;
    return p;
}

ZeroSearch find_zeros(const MelnikovProfile& profile, const ZeroOptions& opt) {
    ZeroSearch out;
    const std::size_t n = profile.theta0.size();
    if (n < 2) throw ConfigError("find_zeros: profile needs at least two grid points");
    double peak = 0.0;
    for (double v : profile.numeric) peak = std::fmax(peak, std::fabs(v));
    if (peak < opt.zero_profile_tol) {
        out.degenerate = true;
        return out;
    }

    auto value_at = [&](double theta) {
        return melnikov_numeric(profile.setup.with_theta0(theta), profile.branch, profile.quad).value;
    };

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double va = profile.numeric[i];
        const double vb = profile.numeric[j];
        const bool crosses = (va < 0.0 && vb >= 0.0) || (va > 0.0 && vb <= 0.0);
        if (!crosses) continue;
        double lo = profile.theta0[i];
        double hi = profile.theta0[j];
        if (j == 0) hi += kTwoPi;
        double flo = va;
        while (hi - lo > opt.theta_tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            const double fm = value_at(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm > 0.0) == (flo > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        const double h = opt.derivative_step;
        MelnikovZero z;
        z.theta0 = analytic::wrap_angle(root);
        z.derivative = (value_at(root + h) - value_at(root - h)) / (2.0 * h);
        z.simple = std::fabs(z.derivative) > opt.simple_threshold;
        out.zeros.push_back(z);
    }
    out.degenerate = out.zeros.empty();
    return out;
}

HarmonicFit fit_harmonic(const std::vector<double>& theta, const std::vector<double>& values) {
    if (theta.size() != values.size() || theta.size() < 2)
        throw ConfigError("fit_harmonic: need at least two (theta, value) pairs of equal length");
    double cc = 0.0, ss = 0.0, cs = 0.0, cy = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double c = std::cos(theta[i]);
        const double s = std::sin(theta[i]);
        cc += c * c;
        ss += s * s;
        cs += c * s;
        cy += c * values[i];
        sy += s * values[i];
    }
    const double det = cc * ss - cs * cs;
    if (std::fabs(det) < 1e-14) throw ConfigError("fit_harmonic: singular design (grid does not resolve cos/sin)");
    HarmonicFit f;
    f.A = (cy * ss - sy * cs) / det;
    f.B = (sy * cc - cy * cs) / det;
    double r2 = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double r = values[i] - f.A * std::cos(theta[i]) - f.B * std::sin(theta[i]);
        r2 += r * r;
    }
    f.rms_residual = std::sqrt(r2 / static_cast<double>(theta.size()));
    return f;
}

} // namespace lorenz5::melnikov
