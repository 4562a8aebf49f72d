#ifndef LORENZ5_NUMERICS_H
#define LORENZ5_NUMERICS_H

#include "lorenz5/geometry.h"
#include "lorenz5/types.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

namespace lorenz5::numerics {

enum class Method { Rk4, DormandPrince45 };

struct IntegratorConfig {
    Method method = Method::DormandPrince45;
    /// Fixed step for Rk4 (the span is divided into equal steps no longer than this).
    double step = 1e-3;
    double rtol = 1e-10;
    double atol = 1e-10;
    std::size_t max_steps = 20'000'000;

    void validate() const;
};

enum class IntegrationStatus { Ok, MaxStepsExceeded, NonFinite, StepSizeUnderflow };

std::string to_string(IntegrationStatus s);
std::string to_string(Method m);
Method parse_method(const std::string& name);

template <std::size_t N>
using VecN = std::array<double, N>;

namespace detail {

template <std::size_t N>
inline VecN<N> axpy(const VecN<N>& y, double h, std::initializer_list<std::pair<double, const VecN<N>*>> terms) {
    VecN<N> r = y;
    for (const auto& [c, k] : terms) {
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) r[i] += h * c * (*k)[i];
    }
    return r;
}

template <std::size_t N>
inline bool all_finite(const VecN<N>& y) {
    for (double v : y)
        if (!std::isfinite(v)) return false;
    return true;
}

template <std::size_t N>
inline double scaled_rms(const VecN<N>& v, const VecN<N>& y0, const VecN<N>& y1, double atol, double rtol) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double sc = atol + rtol * std::fmax(std::fabs(y0[i]), std::fabs(y1[i]));
        const double q = v[i] / sc;
        s += q * q;
    }
    return std::sqrt(s / static_cast<double>(N));
}

// Dormand-Prince 5(4) tableau.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t N, class Observer>
inline bool notify(Observer& observer, double t, const VecN<N>& y) {
    if constexpr (std::is_same_v<std::invoke_result_t<Observer&, double, const VecN<N>&>, bool>)
        return observer(t, y);
    else {
        observer(t, y);
        return true;
    }
}

} // namespace detail

/// Integrates the autonomous system y' = rhs(y) from (t, y) to t1, in either
/// direction. `observer(t, y)` is called for the initial point and after every
/// accepted step; an observer returning bool can end the run early by returning
/// false. On return `t` and `y` hold the last accepted point.
template <std::size_t N, class Rhs, class Observer>
IntegrationStatus integrate_n(Rhs&& rhs, VecN<N>& y, double& t, double t1, const IntegratorConfig& cfg,
                              Observer&& observer, std::size_t* steps_taken = nullptr) {
    using namespace detail;
    cfg.validate();
    std::size_t steps = 0;
    auto finish = [&](IntegrationStatus s) {
        if (steps_taken) *steps_taken = steps;
        return s;
    };
    if (!all_finite(y) || !std::isfinite(t) || !std::isfinite(t1)) throw DomainError("integrate: non-finite input");
    if (!notify<N>(observer, t, y) || t1 == t) return finish(IntegrationStatus::Ok);
    const double span = t1 - t;
    const double dir = span > 0 ? 1.0 : -1.0;

    if (cfg.method == Method::Rk4) {
        const double ratio = std::fabs(span) / cfg.step;
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9 * ratio)));
        const double h = span / static_cast<double>(n);
        const double t0 = t;
        for (std::size_t i = 1; i <= n; ++i) {
            if (steps >= cfg.max_steps) return finish(IntegrationStatus::MaxStepsExceeded);
            VecN<N> yn{};
            try {
                const VecN<N> k1 = rhs(y);
                const VecN<N> k2 = rhs(axpy<N>(y, 0.5 * h, {{1.0, &k1}}));
                const VecN<N> k3 = rhs(axpy<N>(y, 0.5 * h, {{1.0, &k2}}));
                const VecN<N> k4 = rhs(axpy<N>(y, h, {{1.0, &k3}}));
                yn = axpy<N>(y, h / 6.0, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
            } catch (const DomainError&) {
                return finish(IntegrationStatus::NonFinite);
            }
            if (!all_finite(yn)) return finish(IntegrationStatus::NonFinite);
            y = yn;
            t = (i == n) ? t1 : t0 + static_cast<double>(i) * h;
            ++steps;
            if (!notify<N>(observer, t, y)) break;
        }
        return finish(IntegrationStatus::Ok);
    }

    // Adaptive Dormand-Prince 5(4), first-same-as-last.
    VecN<N> k1 = rhs(y);
    double h;
    {
        // Starting step after Hairer, Norsett & Wanner.
        const double d0 = scaled_rms<N>(y, y, y, cfg.atol, cfg.rtol);
        const double d1 = scaled_rms<N>(k1, y, y, cfg.atol, cfg.rtol);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::fmin(h0, std::fabs(span));
        const VecN<N> y1 = axpy<N>(y, dir * h0, {{1.0, &k1}});
        VecN<N> df = rhs(y1);
        for (std::size_t i = 0; i < N; ++i) df[i] -= k1[i];
        const double d2 = scaled_rms<N>(df, y, y, cfg.atol, cfg.rtol) / h0;
        const double dm = std::fmax(d1, d2);
        const double h1 = dm <= 1e-15 ? std::fmax(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::fmin(100.0 * h0, h1);
    }
    h = dir * std::fmin(h, std::fabs(span));
    int nonfinite_rejections = 0;
    bool last_rejected = false;
    while (dir * (t1 - t) > 0.0) {
        if (steps >= cfg.max_steps) return finish(IntegrationStatus::MaxStepsExceeded);
        bool last = false;
        if (dir * (t + h - t1) >= 0.0) {
            h = t1 - t;
            last = true;
        }
        if (std::fabs(h) <= 16.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, std::fabs(t)))
            return finish(IntegrationStatus::StepSizeUnderflow);

        VecN<N> yn{}, k7{};
        double err = std::numeric_limits<double>::infinity();
        try {
            const VecN<N> k2 = rhs(axpy<N>(y, h, {{a21, &k1}}));
            const VecN<N> k3 = rhs(axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
            const VecN<N> k4 = rhs(axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
            const VecN<N> k5 = rhs(axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
            const VecN<N> k6 = rhs(axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
            yn = axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            if (all_finite(yn)) {
                k7 = rhs(yn);
                VecN<N> ev{};
                for (std::size_t i = 0; i < N; ++i)
                    ev[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                err = scaled_rms<N>(ev, y, yn, cfg.atol, cfg.rtol);
            }
        } catch (const DomainError&) {
            // A stage left the finite range; treated like an infinite error estimate.
        }
        if (!std::isfinite(err)) {
            if (++nonfinite_rejections > 60) return finish(IntegrationStatus::NonFinite);
            h *= 0.1;
            last_rejected = true;
            continue;
        }
        nonfinite_rejections = 0;
        if (err <= 1.0) {
            y = yn;
            t = last ? t1 : t + h;
            k1 = k7;
            ++steps;
            if (!notify<N>(observer, t, y)) break;
            double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
            fac = std::fmin(last_rejected ? 1.0 : 5.0, std::fmax(0.2, fac));
            h *= fac;
            last_rejected = false;
        } else {
            h *= std::fmax(0.2, 0.9 * std::pow(err, -0.2));
            last_rejected = true;
        }
    }
    return finish(IntegrationStatus::Ok);
}

/// Final state only.
template <std::size_t N, class Rhs>
IntegrationStatus propagate_n(Rhs&& rhs, VecN<N>& y, double& t, double t1, const IntegratorConfig& cfg) {
    return integrate_n<N>(std::forward<Rhs>(rhs), y, t, t1, cfg, [](double, const VecN<N>&) {});
}

using VectorField = std::function<Vec5(const State&)>;

struct TrackedSeries {
    std::string name;
    std::vector<double> values;
};

/// Recorded run: every accepted step, plus conserved-quantity series.
struct Trajectory {
    std::vector<double> times;
    std::vector<State> states;
    std::vector<TrackedSeries> tracked;
    IntegrationStatus status = IntegrationStatus::Ok;

    std::size_t size() const { return times.size(); }
    bool ok() const { return status == IntegrationStatus::Ok; }
    /// max |q - q(0)| for the named series; throws ConfigError if absent.
    double drift(const std::string& name) const;
    const TrackedSeries& series(const std::string& name) const;
};

Trajectory integrate(const VectorField& rhs, const State& x0, double t0, double t1, const IntegratorConfig& cfg,
                     const std::vector<geometry::ScalarField>& track = {});

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    std::size_t max_intervals = 4000;
    /// Initial uniform partition of the range.
    std::size_t initial_pieces = 16;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]; the
/// interval with the largest local error estimate is bisected until the summed
/// estimate drops below abs_tol.
QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt = {});

/// Integral over [-T, T] of an integrand that decays at both ends.
QuadResult quad_improper(const std::function<double(double)>& f, double T, double tol);

struct Crossing {
    double t = 0.0;
    State state{};
    double event_value = 0.0;
};

/// Locates the zero of `event` between recorded steps i and i+1 of `traj` by
/// bisection in time, re-integrating from step i for each probe, until
/// |event| < event_tol. Throws DomainError if the event does not change sign on
/// the segment or vanishes at both ends.
Crossing refine_crossing(const VectorField& rhs, const Trajectory& traj, const geometry::ScalarField& event,
                         std::size_t i, const IntegratorConfig& cfg, double event_tol = 1e-10);

Crossing refine_crossing_segment(const VectorField& rhs, double ta, const State& xa, double tb, const State& xb,
                                 const geometry::ScalarField& event, const IntegratorConfig& cfg,
                                 double event_tol = 1e-10);

} // namespace lorenz5::numerics

#endif // LORENZ5_NUMERICS_H
