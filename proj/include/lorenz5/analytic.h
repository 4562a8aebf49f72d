#ifndef LORENZ5_ANALYTIC_H
#define LORENZ5_ANALYTIC_H

#include "lorenz5/types.h"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lorenz5::analytic {

/// Sign choice (s1, s2, s3) of the heteroclinic family
///   mu = (s1 M sech(Mt), s2 M tanh(Mt), s3 M sech(Mt)).
/// Only triples with s1 = s2 * s3 solve the unperturbed equations, and only
/// those can be constructed.
class HeteroclinicBranch {
public:
    /// (+,+,+)
    HeteroclinicBranch() = default;
    HeteroclinicBranch(int s1, int s2, int s3);

    /// Parses "+++", "+--", "-+-" or "--+".
    static HeteroclinicBranch parse(std::string_view text);
    static std::array<HeteroclinicBranch, 4> all();
    static bool admissible(int s1, int s2, int s3);

    int s1() const { return s1_; }
    int s2() const { return s2_; }
    int s3() const { return s3_; }
    std::string to_string() const;

    friend bool operator==(const HeteroclinicBranch&, const HeteroclinicBranch&) = default;

private:
    int s1_ = 1;
    int s2_ = 1;
    int s3_ = 1;
};

/// Parameters of the Melnikov problem on the energy level h = M^2 + k.
class MelnikovSetup {
public:
    /// Throws DomainError unless M > 0, k >= 0 and all values are finite.
    MelnikovSetup(double M, double k, double theta0);

    double M() const { return M_; }
    double k() const { return k_; }
    double theta0() const { return theta0_; }
    MelnikovSetup with_theta0(double theta0) const { return {M_, k_, theta0}; }

    /// Separatrix energy F(mu~) = M^2.
    double h_tilde() const { return M_ * M_; }
    double h() const { return M_ * M_ + k_; }
    /// Oscillator frequency dG/dI; G(I) = I.
    double omega() const { return 1.0; }
    /// l0 = G^{-1}(h - h~).
    double action() const { return h() - h_tilde(); }

private:
    double M_;
    double k_;
    double theta0_;
};

using Mu = std::array<double, 3>;

/// Closed-form heteroclinic orbit at time t.
Mu heteroclinic(double t, double M, const HeteroclinicBranch& b = {});
/// Time derivative of the closed form.
Mu heteroclinic_velocity(double t, double M, const HeteroclinicBranch& b = {});

/// Unchecked versions taking an arbitrary sign triple (negative controls).
Mu heteroclinic_formula(double t, double M, int s1, int s2, int s3);
Mu heteroclinic_formula_velocity(double t, double M, int s1, int s2, int s3);

/// max-norm of (d/dt closed form) - (mu-part of the eps = 0 vector field).
double heteroclinic_ode_residual(double t, double M, int s1, int s2, int s3);

struct Cartesian {
    double u1 = 0.0;
    double u2 = 0.0;
};

struct ActionAngle {
    double action = 0.0;
    /// In [0, 2pi); empty at the origin where the angle is undefined.
    std::optional<double> angle;
};

Cartesian action_angle_to_cart(double action, double theta);
ActionAngle cart_to_action_angle(double u1, double u2);

/// Wraps an angle into [0, 2pi).
double wrap_angle(double theta);

struct OrbitPoint {
    Mu mu{};
    double action = 0.0;
    /// t + theta0, not wrapped.
    double theta = 0.0;
    /// (mu1, mu2, mu3, u1, u2)
    State state{};
};

/// Unperturbed solution on the energy level of `s`: heteroclinic mu(t),
/// I = k, theta = t + theta0.
OrbitPoint unperturbed_orbit(double t, const MelnikovSetup& s, const HeteroclinicBranch& b = {});

/// (0, M, 0) and (0, -M, 0) with u = 0.
std::pair<State, State> saddle_points(double M);

} // namespace lorenz5::analytic

#endif // LORENZ5_ANALYTIC_H
