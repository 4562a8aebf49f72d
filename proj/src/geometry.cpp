#include "lorenz5/geometry.h"

#include <cmath>
#include <limits>

namespace lorenz5::geometry {

namespace {

void set_pair(Mat5& m, std::size_t i, std::size_t j, double v) {
    m[i][j] = v;
    m[j][i] = -v;
}

} // namespace

Vec5 finite_difference_gradient(const ScalarField& f, const State& p) {
    static const double base = std::cbrt(std::numeric_limits<double>::epsilon());
    Vec5 g{};
    for (std::size_t i = 0; i < kDim; ++i) {
        const double h = base * std::fmax(1.0, std::fabs(p[i]));
        State hi = p, lo = p;
        hi[i] += h;
        lo[i] -= h;
        // Use the actually representable step.
        g[i] = (f.eval(hi) - f.eval(lo)) / (hi[i] - lo[i]);
    }
    return g;
}

Vec5 gradient(const ScalarField& f, const State& p, GradientPolicy policy) {
    if (f.grad) return (*f.grad)(p);
    if (policy == GradientPolicy::AnalyticOnly)
        throw ConfigError("field '" + f.name + "' has no analytic gradient and finite differences are disabled");
    return finite_difference_gradient(f, p);
}

Mat5 PoissonStructure::matrix(const State& p, double eps) const {
    require_finite(p, "PoissonStructure::matrix");
    require_finite(eps, "PoissonStructure::matrix eps");
    return matrix_(p, eps);
}

Mat5 PoissonStructure::derivative(std::size_t l, const State& p, double eps) const {
    if (l >= kDim) throw DomainError("PoissonStructure::derivative: index out of range");
    return derivative_(l, p, eps);
}

Mat5 structure_matrix_r5(const State& x, double eps) {
    require_finite(x, "structure_matrix_r5");
    require_finite(eps, "structure_matrix_r5 eps");
    Mat5 j{};
    set_pair(j, 1, 2, x[0]);
    set_pair(j, 0, 2, -x[1]);
    set_pair(j, 1, 4, -eps * x[0]);
    set_pair(j, 0, 4, eps * x[1]);
    set_pair(j, 4, 3, 1.0);
    return j;
}

Mat5 structure_matrix_se2r2(const State& p) {
    require_finite(p, "structure_matrix_se2r2");
    Mat5 j{};
    set_pair(j, 1, 2, p[0]);
    set_pair(j, 0, 2, -p[1]);
    set_pair(j, 4, 3, 1.0);
    return j;
}

PoissonStructure r5_structure() {
    return PoissonStructure(
        "r5", Chart::X, [](const State& x, double eps) { return structure_matrix_r5(x, eps); },
        [](std::size_t l, const State&, double eps) {
            Mat5 d{};
            if (l == 0) {
                set_pair(d, 1, 2, 1.0);
                set_pair(d, 1, 4, -eps);
            } else if (l == 1) {
                set_pair(d, 0, 2, -1.0);
                set_pair(d, 0, 4, eps);
            }
            return d;
        });
}

PoissonStructure se2_r2_structure() {
    return PoissonStructure(
        "se2*xR2", Chart::MuU, [](const State& p, double) { return structure_matrix_se2r2(p); },
        [](std::size_t l, const State&, double) {
            Mat5 d{};
            if (l == 0) set_pair(d, 1, 2, 1.0);
            else if (l == 1) set_pair(d, 0, 2, -1.0);
            return d;
        });
}

PoissonStructure with_flipped_entry(const PoissonStructure& base, std::size_t i, std::size_t j) {
    if (i >= kDim || j >= kDim || i == j) throw DomainError("with_flipped_entry: bad index pair");
    auto flip = [i, j](Mat5 m) {
        m[i][j] = -m[i][j];
        m[j][i] = -m[j][i];
        return m;
    };
    return PoissonStructure(
        base.label() + "-faulty", base.chart(),
        [base, flip](const State& p, double eps) { return flip(base.matrix(p, eps)); },
        [base, flip](std::size_t l, const State& p, double eps) { return flip(base.derivative(l, p, eps)); });
}

double bracket(const PoissonStructure& s, const ScalarField& f, const ScalarField& g, const State& p,
               double eps, GradientPolicy policy) {
    const Mat5 j = s.matrix(p, eps);
    const Vec5 df = gradient(f, p, policy);
    const Vec5 dg = gradient(g, p, policy);
    double r = 0.0;
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < kDim; ++b) r += df[a] * j[a][b] * dg[b];
    return r;
}

double antisymmetry_defect(const Mat5& j) {
    double m = 0.0;
    for (std::size_t a = 0; a < kDim; ++a)
        for (std::size_t b = 0; b < kDim; ++b) m = std::fmax(m, std::fabs(j[a][b] + j[b][a]));
    return m;
}

double jacobi_residual(const PoissonStructure& s, const State& p, std::size_t i, std::size_t j,
                       std::size_t k, double eps) {
    if (i >= kDim || j >= kDim || k >= kDim) throw DomainError("jacobi_residual: index out of range");
    if (i == j || j == k || i == k) throw DomainError("jacobi_residual: indices must be distinct");
    const Mat5 jm = s.matrix(p, eps);
    double r = 0.0;
    for (std::size_t l = 0; l < kDim; ++l) {
        const Mat5 d = s.derivative(l, p, eps);
        r += jm[i][l] * d[j][k] + jm[j][l] * d[k][i] + jm[k][l] * d[i][j];
    }
    return r;
}

Vec5 casimir_residual(const PoissonStructure& s, const ScalarField& c, const State& p, double eps) {
    return mat_vec(s.matrix(p, eps), gradient(c, p));
}

Vec5 hamiltonian_vector_field(const PoissonStructure& s, const ScalarField& h, const State& p, double eps) {
    return mat_vec(s.matrix(p, eps), gradient(h, p));
}

ScalarField coordinate(std::size_t i) {
    if (i >= kDim) throw DomainError("coordinate: index out of range");
    return {"x" + std::to_string(i + 1), [i](const State& p) { return p[i]; },
            [i](const State&) {
                Vec5 g{};
                g[i] = 1.0;
                return g;
            }};
}

} // namespace lorenz5::geometry
