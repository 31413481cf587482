#pragma once

#include <cstdint>
#include <random>

#include "levelset/bundle.hpp"

namespace levelset {

// Seeded generator with hand-rolled variate mappings so streams are identical
// across platforms and standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Magnitudes spread evenly across decades of [lo, hi]; lo, hi > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Inclusive bounds.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return (engine_() & 1ull) != 0; }

    // Strictly positive bundle with log-uniform magnitudes.
    Bundle positive_bundle(int n, double lo, double hi) {
        Bundle out(n);
        for (double& x : out) x = log_uniform(lo, hi);
        return out;
    }

    // Signed bundle with log-uniform magnitudes and random signs.
    Bundle signed_bundle(int n, double lo, double hi) {
        Bundle out(n);
        for (double& x : out) x = (coin() ? 1.0 : -1.0) * log_uniform(lo, hi);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace levelset
