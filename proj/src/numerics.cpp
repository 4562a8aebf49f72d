#include "lorenz5/numerics.h"

#include <queue>

namespace lorenz5::numerics {

void IntegratorConfig::validate() const {
    if (method == Method::Rk4 && !(step > 0.0 && std::isfinite(step)))
        throw ConfigError("integrator: step must be positive");
    if (method == Method::DormandPrince45 &&
        !(rtol > 0.0 && atol > 0.0 && std::isfinite(rtol) && std::isfinite(atol)))
        throw ConfigError("integrator: tolerances must be positive");
    if (max_steps == 0) throw ConfigError("integrator: max_steps must be > 0");
}

std::string to_string(IntegrationStatus s) {
    switch (s) {
    case IntegrationStatus::Ok: return "ok";
    case IntegrationStatus::MaxStepsExceeded: return "max-steps-exceeded";
    case IntegrationStatus::NonFinite: return "non-finite";
    case IntegrationStatus::StepSizeUnderflow: return "step-size-underflow";
    }
    return "unknown";
}

std::string to_string(Method m) { return m == Method::Rk4 ? "rk4" : "dp45"; }

Method parse_method(const std::string& name) {
    if (name == "rk4") return Method::Rk4;
    if (name == "dp45" || name == "rk45" || name == "dopri5") return Method::DormandPrince45;
    throw ConfigError("unknown integration method '" + name + "' (expected rk4 or dp45)");
}

const TrackedSeries& Trajectory::series(const std::string& name) const {
    for (const auto& s : tracked)
        if (s.name == name) return s;
    throw ConfigError("trajectory has no tracked series '" + name + "'");
}

double Trajectory::drift(const std::string& name) const {
    const auto& v = series(name).values;
    double d = 0.0;
    for (double q : v) d = std::fmax(d, std::fabs(q - v.front()));
    return d;
}

Trajectory integrate(const VectorField& rhs, const State& x0, double t0, double t1, const IntegratorConfig& cfg,
                     const std::vector<geometry::ScalarField>& track) {
    require_finite(x0, "integrate x0");
    Trajectory traj;
    for (const auto& f : track) traj.tracked.push_back({f.name, {}});
    State y = x0;
    double t = t0;
    traj.status = integrate_n<kDim>(rhs, y, t, t1, cfg, [&](double tt, const State& s) {
        traj.times.push_back(tt);
        traj.states.push_back(s);
        for (std::size_t i = 0; i < track.size(); ++i) traj.tracked[i].values.push_back(track[i](s));
    });
    return traj;
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(c);
    double kron = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = hl * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    return {a, b, kron * hl, std::fabs((kron - gauss) * hl)};
}

} // namespace

QuadResult quad_adaptive(const std::function<double(double)>& f, double a, double b, const QuadOptions& opt) {
    if (!(opt.abs_tol > 0.0)) throw ConfigError("quadrature: tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("quadrature: non-finite limits");
    QuadResult r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    std::priority_queue<Segment> heap;
    const std::size_t pieces = std::max<std::size_t>(1, opt.initial_pieces);
    for (std::size_t i = 0; i < pieces; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(pieces);
        const double hi = (i + 1 == pieces) ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(pieces);
        heap.push(gk15(f, lo, hi));
        r.evaluations += 15;
    }
    auto totals = [&heap]() {
        // Re-summing from scratch keeps the totals free of cancellation drift.
        auto copy = heap;
        double v = 0.0, e = 0.0;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v, e};
    };
    double err = totals().second;
    while (err > opt.abs_tol && heap.size() < opt.max_intervals) {
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        const Segment left = gk15(f, worst.a, mid);
        const Segment right = gk15(f, mid, worst.b);
        r.evaluations += 30;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (err <= opt.abs_tol) err = totals().second;
    }
    const auto [value, error] = totals();
    r.value = value;
    r.error = error;
    r.intervals = heap.size();
    r.converged = error <= opt.abs_tol;
    return r;
}

QuadResult quad_improper(const std::function<double(double)>& f, double T, double tol) {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("quad_improper: truncation T must be positive");
    QuadOptions opt;
    opt.abs_tol = tol;
    return quad_adaptive(f, -T, T, opt);
}

Crossing refine_crossing(const VectorField& rhs, const Trajectory& traj, const geometry::ScalarField& event,
                         std::size_t i, const IntegratorConfig& cfg, double event_tol) {
    if (i + 1 >= traj.size()) throw DomainError("refine_crossing: step index out of range");
    return refine_crossing_segment(rhs, traj.times[i], traj.states[i], traj.times[i + 1], traj.states[i + 1], event,
                                   cfg, event_tol);
}

Crossing refine_crossing_segment(const VectorField& rhs, double ta, const State& xa, double tb, const State& xb,
                                 const geometry::ScalarField& event, const IntegratorConfig& cfg, double event_tol) {
    const double ga = event(xa);
    const double gb = event(xb);
    if (ga == 0.0 && gb == 0.0) throw DomainError("refine_crossing: event vanishes at both ends (degenerate)");
    if (ga == 0.0) return {ta, xa, ga};
    if (gb == 0.0) return {tb, xb, gb};
    if ((ga > 0.0) == (gb > 0.0)) throw DomainError("refine_crossing: event does not change sign on the segment");

    double lo = ta, hi = tb;
    Crossing best{tb, xb, gb};
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        State y = xa;
        double t = ta;
        const auto status = propagate_n<kDim>(rhs, y, t, mid, cfg);
        if (status != IntegrationStatus::Ok) throw DomainError("refine_crossing: re-integration failed");
        const double g = event(y);
        best = {mid, y, g};
        if (std::fabs(g) < event_tol || g == 0.0) break;
        if ((g > 0.0) == (ga > 0.0)) lo = mid;
        else hi = mid;
    }
    return best;
}

} // namespace lorenz5::numerics
