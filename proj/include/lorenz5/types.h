#ifndef LORENZ5_TYPES_H
#define LORENZ5_TYPES_H

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace lorenz5 {

inline constexpr std::size_t kDim = 5;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point of phase space. Interpreted as (x1..x5) in the original chart or
/// (mu1, mu2, mu3, u1, u2) on se*(2) x R^2, depending on context.
using State = std::array<double, kDim>;
using Vec5 = std::array<double, kDim>;
using Mat5 = std::array<std::array<double, kDim>, kDim>;

enum class Chart { X, MuU };

/// Bad numerical input: non-finite states, negative actions, M <= 0, ...
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent or unusable configuration (missing gradients, bad grids, ...).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void require_finite(const State& x, const char* what) {
    for (double v : x) {
        if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite component");
    }
}

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite value");
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

inline double norm_inf(const Vec5& v) {
    double m = 0.0;
    for (double c : v) m = std::fmax(m, std::fabs(c));
    return m;
}

inline double norm2(const Vec5& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

inline Vec5 mat_vec(const Mat5& a, const Vec5& v) {
    Vec5 r{};
    for (std::size_t i = 0; i < kDim; ++i)
        for (std::size_t j = 0; j < kDim; ++j) r[i] += a[i][j] * v[j];
    return r;
}

inline Vec5 sub(const Vec5& a, const Vec5& b) {
    Vec5 r{};
    for (std::size_t i = 0; i < kDim; ++i) r[i] = a[i] - b[i];
    return r;
}

} // namespace lorenz5

#endif // LORENZ5_TYPES_H
