#ifndef LORENZ5_MODELS_H
#define LORENZ5_MODELS_H

#include "lorenz5/geometry.h"
#include "lorenz5/types.h"

namespace lorenz5::models {

struct ModelParams {
    double eps = 0.0;
    Chart chart = Chart::MuU;
};

/// Lorenz five-component model in the original variables.
Vec5 lorenz5_rhs(const State& x, double eps);

/// The same flow after the chart change to se*(2) x R^2.
Vec5 transformed_rhs(const State& p, double eps);

/// Dispatch on chart.
Vec5 rhs(const State& s, const ModelParams& params);

/// (x1, x2, x3, x4, eps x3 + x5).
State phi(const State& x, double eps);
State phi_inv(const State& p, double eps);
/// Constant Jacobian of phi.
Mat5 phi_jacobian(double eps);

double hamiltonian_r5(const State& x);
double hamiltonian_eps(const State& p, double eps);

/// Casimir mu1^2 + mu2^2 (equivalently x1^2 + x2^2; phi leaves both unchanged).
double casimir(const State& p);

/// Lie-Poisson part of the unperturbed energy, 1/2 (mu1^2 + 2 mu2^2 + mu3^2).
double lie_poisson_energy(const State& p);

/// Oscillator action I = (u1^2 + u2^2) / 2.
double oscillator_action(const State& p);

/// H^eps = F(mu) + G(I) + eps H1(mu, theta, I) + remainder, with
/// G(I) = I, H1 = -mu3 sqrt(2I) sin(theta) and remainder = eps^2 mu3^2 / 2.
struct SplitHamiltonian {
    double F = 0.0;
    double G = 0.0;
    double H1 = 0.0;
    double remainder = 0.0;

    double total(double eps) const { return F + G + eps * H1 + remainder; }
};

SplitHamiltonian split_hamiltonian(double mu1, double mu2, double mu3, double action, double theta,
                                   double eps);

/// D(phi) * lorenz5_rhs(x) - transformed_rhs(phi(x)).
Vec5 pushforward_residual(const State& x, double eps);

/// Jacobian of the mu-block of transformed_rhs, row-major 3x3.
std::array<std::array<double, 3>, 3> mu_jacobian(double mu1, double mu2, double mu3, double eps,
                                                 double u2 = 0.0);

// Scalar fields with analytic gradients, for bracket computations.
geometry::ScalarField hamiltonian_r5_field();
geometry::ScalarField hamiltonian_eps_field(double eps);
geometry::ScalarField casimir_field();
geometry::ScalarField lie_poisson_energy_field();
/// G as a function on the (mu, u) chart: (u1^2 + u2^2) / 2.
geometry::ScalarField oscillator_action_field();
/// H1 on the (mu, u) chart: -mu3 u2, since sqrt(2I) sin(theta) = u2.
geometry::ScalarField perturbation_field();

} // namespace lorenz5::models

#endif // LORENZ5_MODELS_H
