#ifndef LORENZ5_GEOMETRY_H
#define LORENZ5_GEOMETRY_H

#include "lorenz5/types.h"

#include <functional>
#include <optional>
#include <string>

namespace lorenz5::geometry {

/// Smooth function on the 5-dimensional phase space. The gradient is
/// optional; callers fall back to central differences when it is absent.
struct ScalarField {
    std::string name;
    std::function<double(const State&)> eval;
    std::optional<std::function<Vec5(const State&)>> grad;

    double operator()(const State& p) const { return eval(p); }
};

enum class GradientPolicy { AnalyticOnly, AllowFiniteDifference };

/// Gradient of f at p. Uses the analytic gradient when present, otherwise
/// central differences with step cbrt(eps_mach) * max(1, |p_i|).
/// Throws ConfigError if no analytic gradient exists and the policy forbids
/// differencing.
Vec5 gradient(const ScalarField& f, const State& p,
              GradientPolicy policy = GradientPolicy::AllowFiniteDifference);

/// Central-difference gradient, exposed for consistency tests.
Vec5 finite_difference_gradient(const ScalarField& f, const State& p);

/// Poisson tensor J(p, eps) with J_ij = {x_i, x_j}. All entries here are
/// polynomials of degree <= 1 in the coordinates, so the entry derivatives
/// dJ_ij/dx_l are supplied in closed form and the Jacobi identity can be
/// checked without nested differencing.
class PoissonStructure {
public:
    using MatrixFn = std::function<Mat5(const State&, double)>;
    using DerivativeFn = std::function<Mat5(std::size_t, const State&, double)>;

    PoissonStructure(std::string label, Chart chart, MatrixFn matrix, DerivativeFn derivative)
        : label_(std::move(label)), chart_(chart), matrix_(std::move(matrix)),
          derivative_(std::move(derivative)) {}

    const std::string& label() const { return label_; }
    Chart chart() const { return chart_; }
    static constexpr std::size_t dim() { return kDim; }

    Mat5 matrix(const State& p, double eps) const;
    /// dJ/dx_l at p.
    Mat5 derivative(std::size_t l, const State& p, double eps) const;

private:
    std::string label_;
    Chart chart_;
    MatrixFn matrix_;
    DerivativeFn derivative_;
};

/// Bracket of the original model on R^5: J23 = x1, J13 = -x2, J25 = -eps x1, J15 = eps x2,
/// J54 = 1, plus antisymmetric completion.
Mat5 structure_matrix_r5(const State& x, double eps);

/// Product of the se*(2) Lie-Poisson bracket and the canonical bracket on R^2:
/// J(mu2,mu3) = mu1, J(mu1,mu3) = -mu2, J(u2,u1) = 1.
Mat5 structure_matrix_se2r2(const State& p);

PoissonStructure r5_structure();
PoissonStructure se2_r2_structure();

/// Copy of `base` with the sign of the (i, j) and (j, i) entries reversed.
/// Used as a negative control for the verification suite.
PoissonStructure with_flipped_entry(const PoissonStructure& base, std::size_t i, std::size_t j);

/// {f, g}(p) = grad f^T J(p) grad g.
double bracket(const PoissonStructure& s, const ScalarField& f, const ScalarField& g,
               const State& p, double eps,
               GradientPolicy policy = GradientPolicy::AllowFiniteDifference);

/// max |J + J^T| over all entries.
double antisymmetry_defect(const Mat5& j);

/// Cyclic sum {{x_i,x_j},x_k} + {{x_j,x_k},x_i} + {{x_k,x_i},x_j} evaluated as
/// sum_l (J_il d_l J_jk + J_jl d_l J_ki + J_kl d_l J_ij). Indices are 0-based
/// and must be distinct.
double jacobi_residual(const PoissonStructure& s, const State& p, std::size_t i, std::size_t j,
                       std::size_t k, double eps);

/// J(p) grad C(p); the zero vector exactly when C is a Casimir at p.
Vec5 casimir_residual(const PoissonStructure& s, const ScalarField& c, const State& p,
                      double eps = 0.0);

/// X_H(p) = J(p) grad H(p).
Vec5 hamiltonian_vector_field(const PoissonStructure& s, const ScalarField& h, const State& p,
                              double eps);

/// Coordinate function x_i (0-based), with analytic gradient.
ScalarField coordinate(std::size_t i);

} // namespace lorenz5::geometry

#endif // LORENZ5_GEOMETRY_H
