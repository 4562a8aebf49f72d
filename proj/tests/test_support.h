#ifndef LORENZ5_TEST_SUPPORT_H
#define LORENZ5_TEST_SUPPORT_H

#include "lorenz5/types.h"

#include <cstdint>
#include <random>
#include <vector>

namespace lorenz5::test {

inline constexpr std::uint64_t kSeed = 20020308;

/// Fixed-seed generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    /// Point in [-5, 5]^5.
    State point(double box = 5.0) {
        State p{};
        for (auto& v : p) v = uniform(-box, box);
        return p;
    }

    std::vector<State> points(std::size_t n, double box = 5.0) {
        std::vector<State> out(n);
        for (auto& p : out) p = point(box);
        return out;
    }

private:
    std::mt19937_64 rng_;
};

} // namespace lorenz5::test

#endif // LORENZ5_TEST_SUPPORT_H
