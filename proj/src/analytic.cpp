#include "lorenz5/analytic.h"

#include "lorenz5/models.h"

#include <cmath>

namespace lorenz5::analytic {

HeteroclinicBranch::HeteroclinicBranch(int s1, int s2, int s3) : s1_(s1), s2_(s2), s3_(s3) {
    if (!admissible(s1, s2, s3))
        throw DomainError("HeteroclinicBranch: sign triple is not a solution (need s1 = s2*s3, signs +-1)");
}

bool HeteroclinicBranch::admissible(int s1, int s2, int s3) {
    auto unit = [](int s) { return s == 1 || s == -1; };
    return unit(s1) && unit(s2) && unit(s3) && s1 == s2 * s3;
}

HeteroclinicBranch HeteroclinicBranch::parse(std::string_view text) {
    if (text.size() != 3) throw DomainError("branch must be three sign characters, e.g. +++");
    std::array<int, 3> s{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (text[i] == '+') s[i] = 1;
        else if (text[i] == '-') s[i] = -1;
        else throw DomainError("branch must consist of '+' and '-'");
    }
    return {s[0], s[1], s[2]};
}

std::array<HeteroclinicBranch, 4> HeteroclinicBranch::all() {
    return {HeteroclinicBranch(1, 1, 1), HeteroclinicBranch(1, -1, -1), HeteroclinicBranch(-1, 1, -1),
            HeteroclinicBranch(-1, -1, 1)};
}

std::string HeteroclinicBranch::to_string() const {
    std::string r;
    for (int s : {s1_, s2_, s3_}) r += s > 0 ? '+' : '-';
    return r;
}

MelnikovSetup::MelnikovSetup(double M, double k, double theta0) : M_(M), k_(k), theta0_(theta0) {
    require_finite(M, "MelnikovSetup M");
    require_finite(k, "MelnikovSetup k");
    require_finite(theta0, "MelnikovSetup theta0");
    if (!(M > 0.0)) throw DomainError("MelnikovSetup: M must be > 0");
    if (!(k >= 0.0)) throw DomainError("MelnikovSetup: k must be >= 0");
}

Mu heteroclinic_formula(double t, double M, int s1, int s2, int s3) {
    const double sh = sech(M * t);
    return {s1 * M * sh, s2 * M * std::tanh(M * t), s3 * M * sh};
}

Mu heteroclinic_formula_velocity(double t, double M, int s1, int s2, int s3) {
    const double sh = sech(M * t);
    const double th = std::tanh(M * t);
    const double m2 = M * M;
    return {-s1 * m2 * sh * th, s2 * m2 * sh * sh, -s3 * m2 * sh * th};
}

Mu heteroclinic(double t, double M, const HeteroclinicBranch& b) {
    require_finite(t, "heteroclinic t");
    if (!(M > 0.0)) throw DomainError("heteroclinic: M must be > 0");
    return heteroclinic_formula(t, M, b.s1(), b.s2(), b.s3());
}

Mu heteroclinic_velocity(double t, double M, const HeteroclinicBranch& b) {
    if (!(M > 0.0)) throw DomainError("heteroclinic_velocity: M must be > 0");
    return heteroclinic_formula_velocity(t, M, b.s1(), b.s2(), b.s3());
}

double heteroclinic_ode_residual(double t, double M, int s1, int s2, int s3) {
    const Mu mu = heteroclinic_formula(t, M, s1, s2, s3);
    const Mu v = heteroclinic_formula_velocity(t, M, s1, s2, s3);
    const Vec5 f = models::transformed_rhs({mu[0], mu[1], mu[2], 0.0, 0.0}, 0.0);
    double r = 0.0;
    for (std::size_t i = 0; i < 3; ++i) r = std::fmax(r, std::fabs(v[i] - f[i]));
    return r;
}

double wrap_angle(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2pi.
    if (w >= kTwoPi) w = 0.0;
    return w;
}

Cartesian action_angle_to_cart(double action, double theta) {
    require_finite(action, "action_angle_to_cart I");
    require_finite(theta, "action_angle_to_cart theta");
    if (action < 0.0) throw DomainError("action_angle_to_cart: I must be >= 0");
    const double r = std::sqrt(2.0 * action);
    return {r * std::cos(theta), r * std::sin(theta)};
}

ActionAngle cart_to_action_angle(double u1, double u2) {
    require_finite(u1, "cart_to_action_angle u1");
    require_finite(u2, "cart_to_action_angle u2");
    ActionAngle r;
    r.action = 0.5 * (u1 * u1 + u2 * u2);
    if (u1 != 0.0 || u2 != 0.0) r.angle = wrap_angle(std::atan2(u2, u1));
    return r;
}

OrbitPoint unperturbed_orbit(double t, const MelnikovSetup& s, const HeteroclinicBranch& b) {
    OrbitPoint o;
    o.mu = heteroclinic(t, s.M(), b);
    o.action = s.action();
    o.theta = t + s.theta0();
    const Cartesian u = action_angle_to_cart(o.action, o.theta);
    o.state = {o.mu[0], o.mu[1], o.mu[2], u.u1, u.u2};
    return o;
}

std::pair<State, State> saddle_points(double M) {
    require_finite(M, "saddle_points M");
    if (!(M > 0.0)) throw DomainError("saddle_points: M must be > 0");
    return {State{0.0, M, 0.0, 0.0, 0.0}, State{0.0, -M, 0.0, 0.0, 0.0}};
}

} // namespace lorenz5::analytic
