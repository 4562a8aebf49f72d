#ifndef LORENZ5_MELNIKOV_H
#define LORENZ5_MELNIKOV_H

#include "lorenz5/analytic.h"

#include <cstddef>
#include <vector>

namespace lorenz5::melnikov {

using analytic::HeteroclinicBranch;
using analytic::MelnikovSetup;

struct QuadConfig {
    /// Truncation of the improper integral to [-T, T]; <= 0 selects 50 / M.
    double T = 0.0;
    /// Absolute tolerance of the adaptive quadrature.
    double abs_tol = 1e-10;
    /// Upper bound accepted for the analytic tail estimate.
    double tail_tol = 1e-12;

    double truncation(double M) const { return T > 0.0 ? T : 50.0 / M; }
};

/// Melnikov integrand along the unperturbed orbit:
///   {F, H1}(t, theta0) = -mu1(t) mu2(t) sqrt(2k) sin(t + theta0).
double integrand(double t, const MelnikovSetup& s, const HeteroclinicBranch& b = {});

/// The same integrand evaluated as a Lie-Poisson bracket of F and H1 on the
/// product structure, at the unperturbed orbit point.
double integrand_via_bracket(double t, const MelnikovSetup& s, const HeteroclinicBranch& b = {});

/// Bound on the part of the integral outside [-T, T]:
/// 2 sqrt(2k) M^2 (2/M) exp(-M T).
double tail_bound(const MelnikovSetup& s, double T);

struct MelnikovValue {
    double value = 0.0;
    /// Quadrature error estimate plus the analytic tail bound.
    double error_estimate = 0.0;
    double tail_bound = 0.0;
    bool converged = false;
};

/// (1 / Omega) * integral of the integrand over [-T, T].
MelnikovValue melnikov_numeric(const MelnikovSetup& s, const HeteroclinicBranch& b = {}, const QuadConfig& q = {});

/// -pi sqrt(2k) sech(pi / (2M)) cos(theta0), for the (+,+,+) branch.
double melnikov_closed(const MelnikovSetup& s);
/// Closed form for any admissible branch; the branch enters through s3.
double melnikov_closed(const MelnikovSetup& s, const HeteroclinicBranch& b);

/// |dM/dtheta0| at the zeros of the closed form: pi sqrt(2k) sech(pi / (2M)).
double closed_zero_slope(const MelnikovSetup& s);

struct MelnikovZero {
    double theta0 = 0.0;
    double derivative = 0.0;
    bool simple = false;
};

struct MelnikovProfile {
    MelnikovSetup setup{1.0, 0.0, 0.0};
    HeteroclinicBranch branch;
    QuadConfig quad;
    std::vector<double> theta0;
    std::vector<double> numeric;
    std::vector<double> closed;
    std::vector<double> error_estimate;
    bool all_converged = true;

    double max_abs_error() const;
};

/// Uniform theta0 grid on [0, 2pi) with `count` points.
std::vector<double> periodic_grid(std::size_t count);

/// Evaluates numeric and closed forms on `grid`. Grid points are processed in
/// parallel when threads > 1; results do not depend on the thread count.
MelnikovProfile build_profile(const MelnikovSetup& s, const HeteroclinicBranch& b, const std::vector<double>& grid,
                              const QuadConfig& q = {}, unsigned threads = 1);

struct ZeroSearch {
    std::vector<MelnikovZero> zeros;
    /// Set when the profile shows no sign change (e.g. k = 0, M identically 0).
    bool degenerate = false;
};

struct ZeroOptions {
    /// Bisection stops once the bracket is narrower than this.
    double theta_tol = 1e-12;
    /// Step of the central-difference derivative.
    double derivative_step = 1e-4;
    /// |dM/dtheta0| above which a zero counts as simple.
    double simple_threshold = 1e-6;
    /// Profiles with max |numeric| below this are treated as identically zero.
    double zero_profile_tol = 1e-12;
};

/// Sign-change bracketing on the profile (periodic wrap included), refined by
/// bisection on the numeric Melnikov function; derivative by central difference.
ZeroSearch find_zeros(const MelnikovProfile& profile, const ZeroOptions& opt = {});

/// Least-squares fit values ~ A cos(theta) + B sin(theta).
struct HarmonicFit {
    double A = 0.0;
    double B = 0.0;
    double rms_residual = 0.0;
};

HarmonicFit fit_harmonic(const std::vector<double>& theta, const std::vector<double>& values);

} // namespace lorenz5::melnikov

#endif // LORENZ5_MELNIKOV_H
