#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qcap/errors.hpp"

namespace qcap {

// Deterministic RNG wrapper. All draws go through explicit algorithms
// (no std::*_distribution) so that a fixed seed yields the same stream
// on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; second value cached.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Poisson draw: CDF inversion below mean 30, rounded Gaussian
    // approximation (clamped at zero) above.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0) || !std::isfinite(mean)) {
            throw data_error("poisson: mean must be finite and nonnegative");
        }
        if (mean == 0.0) return 0;
        if (mean < 30.0) {
            const double u = uniform();
            double p = std::exp(-mean);
            double cdf = p;
            std::uint64_t k = 0;
            while (u >= cdf && k < 10000) {
                ++k;
                p *= mean / static_cast<double>(k);
                cdf += p;
            }
            return k;
        }
        const double x = mean + std::sqrt(mean) * gauss();
        if (x <= 0.0) return 0;
        return static_cast<std::uint64_t>(std::llround(x));
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// SplitMix64 step; used to derive independent per-trial seeds from one
// master seed without correlated low bits.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace qcap
