#include "lorenz5/models.h"

#include <cmath>

namespace lorenz5::models {

Vec5 lorenz5_rhs(const State& x, double eps) {
    require_finite(x, "lorenz5_rhs");
    require_finite(eps, "lorenz5_rhs eps");
    return {-x[1] * x[2] + eps * x[1] * x[4],
            x[0] * x[2] - eps * x[0] * x[4],
            -x[0] * x[1],
            -x[4],
            x[3] + eps * x[0] * x[1]};
}

Vec5 transformed_rhs(const State& p, double eps) {
    require_finite(p, "transformed_rhs");
    require_finite(eps, "transformed_rhs eps");
    const double e2 = eps * eps;
    return {-p[1] * p[2] + eps * p[1] * p[4] - e2 * p[1] * p[2],
            p[0] * p[2] - eps * p[0] * p[4] + e2 * p[0] * p[2],
            -p[0] * p[1],
            -p[4] + eps * p[2],
            p[3]};
}

Vec5 rhs(const State& s, const ModelParams& params) {
    return params.chart == Chart::X ? lorenz5_rhs(s, params.eps) : transformed_rhs(s, params.eps);
}

State phi(const State& x, double eps) {
    require_finite(x, "phi");
    return {x[0], x[1], x[2], x[3], eps * x[2] + x[4]};
}

State phi_inv(const State& p, double eps) {
    require_finite(p, "phi_inv");
    return {p[0], p[1], p[2], p[3], p[4] - eps * p[2]};
}

Mat5 phi_jacobian(double eps) {
    Mat5 d{};
    for (std::size_t i = 0; i < kDim; ++i) d[i][i] = 1.0;
    d[4][2] = eps;
    return d;
}

double hamiltonian_r5(const State& x) {
    require_finite(x, "hamiltonian_r5");
    return 0.5 * (x[0] * x[0] + 2.0 * x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[4] * x[4]);
}

double hamiltonian_eps(const State& p, double eps) {
    require_finite(p, "hamiltonian_eps");
    return 0.5 * (p[0] * p[0] + 2.0 * p[1] * p[1] + p[2] * p[2] + p[3] * p[3] + p[4] * p[4] -
                  2.0 * eps * p[2] * p[4] + eps * eps * p[2] * p[2]);
}

double casimir(const State& p) { return p[0] * p[0] + p[1] * p[1]; }

double lie_poisson_energy(const State& p) {
    return 0.5 * (p[0] * p[0] + 2.0 * p[1] * p[1] + p[2] * p[2]);
}

double oscillator_action(const State& p) { return 0.5 * (p[3] * p[3] + p[4] * p[4]); }

SplitHamiltonian split_hamiltonian(double mu1, double mu2, double mu3, double action, double theta,
                                   double eps) {
    if (!(action >= 0.0)) throw DomainError("split_hamiltonian: action I must be >= 0");
    SplitHamiltonian s;
    s.F = 0.5 * (mu1 * mu1 + 2.0 * mu2 * mu2 + mu3 * mu3);
    s.G = action;
    s.H1 = -mu3 * std::sqrt(2.0 * action) * std::sin(theta);
    s.remainder = 0.5 * eps * eps * mu3 * mu3;
    return s;
}

Vec5 pushforward_residual(const State& x, double eps) {
    const Vec5 pushed = mat_vec(phi_jacobian(eps), lorenz5_rhs(x, eps));
    return sub(pushed, transformed_rhs(phi(x, eps), eps));
}

std::array<std::array<double, 3>, 3> mu_jacobian(double mu1, double mu2, double mu3, double eps,
                                                 double u2) {
    const double a = 1.0 + eps * eps;
    return {{{0.0, -a * mu3 + eps * u2, -a * mu2},
             {a * mu3 - eps * u2, 0.0, a * mu1},
             {-mu2, -mu1, 0.0}}};
}

geometry::ScalarField hamiltonian_r5_field() {
    return {"H", [](const State& x) { return hamiltonian_r5(x); },
            [](const State& x) { return Vec5{x[0], 2.0 * x[1], x[2], x[3], x[4]}; }};
}

geometry::ScalarField hamiltonian_eps_field(double eps) {
    return {"H_eps", [eps](const State& p) { return hamiltonian_eps(p, eps); },
            [eps](const State& p) {
                return Vec5{p[0], 2.0 * p[1], p[2] - eps * p[4] + eps * eps * p[2], p[3],
                            p[4] - eps * p[2]};
            }};
}

geometry::ScalarField casimir_field() {
    return {"casimir", [](const State& p) { return casimir(p); },
            [](const State& p) { return Vec5{2.0 * p[0], 2.0 * p[1], 0.0, 0.0, 0.0}; }};
}

geometry::ScalarField lie_poisson_energy_field() {
    return {"F", [](const State& p) { return lie_poisson_energy(p); },
            [](const State& p) { return Vec5{p[0], 2.0 * p[1], p[2], 0.0, 0.0}; }};
}

geometry::ScalarField oscillator_action_field() {
    return {"I", [](const State& p) { return oscillator_action(p); },
            [](const State& p) { return Vec5{0.0, 0.0, 0.0, p[3], p[4]}; }};
}

geometry::ScalarField perturbation_field() {
    return {"H1", [](const State& p) { return -p[2] * p[4]; },
            [](const State& p) { return Vec5{0.0, 0.0, -p[4], 0.0, -p[2]}; }};
}

} // namespace lorenz5::models
