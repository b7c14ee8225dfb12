// rng.hpp — Seed-deterministic random sampling on top of std::mt19937_64.
// Distributions are generated from raw engine bits so that a given seed
// produces the same stream on every platform and standard library.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qbat {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one spare value cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do {
            u = uniform();
        } while (u <= 0.0);
        const double r = std::sqrt(-2.0 * std::log(u));
        const double theta = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    std::complex<double> complex_gaussian() {
        return {gaussian(), gaussian()};
    }

    // Uniform point on the probability simplex (flat Dirichlet).
    std::vector<double> simplex_weights(int count) {
        std::vector<double> w(static_cast<std::size_t>(count));
        double total = 0.0;
        for (auto& x : w) {
            double u = 0.0;
            do {
                u = uniform();
            } while (u <= 0.0);
            x = -std::log(u);
            total += x;
        }
        for (auto& x : w) {
            x /= total;
        }
        return w;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace qbat
