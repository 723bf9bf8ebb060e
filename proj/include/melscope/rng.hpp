#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "melscope/linalg.hpp"

namespace melscope {

/// mt19937_64 with explicit uniform/normal mappings so that streams are
/// bit-identical across standard library implementations.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : engine_(seed) {}

    /// Decorrelated child seed for stream `index` of a base seed.
    static uint64_t substream(uint64_t seed, uint64_t index) {
        uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Rotation-invariant random direction on the complex unit sphere.
    std::vector<Complex> complex_gaussian_unit(int dim) {
        std::vector<Complex> v(dim);
        for (auto& a : v) a = Complex(normal(), normal());
        const double n = norm(v);
        for (auto& a : v) a /= n;
        return v;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace melscope
