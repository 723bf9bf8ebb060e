#pragma once

#include <vector>

#include "melscope/linalg.hpp"
#include "melscope/rng.hpp"

namespace melscope::testing {

inline ComplexMatrix random_hermitian(SeededRng& rng, int n) {
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i) {
        h.at(i, i) = Complex(rng.normal(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Complex z(rng.normal(), rng.normal());
            h.at(i, j) = z;
            h.at(j, i) = std::conj(z);
        }
    }
    return h;
}

/// Haar-ish random unitary: Gram-Schmidt on a complex Gaussian matrix.
inline ComplexMatrix random_unitary(SeededRng& rng, int n) {
    std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
    for (auto& c : cols)
        for (auto& x : c) x = Complex(rng.normal(), rng.normal());
    for (int k = 0; k < n; ++k) {
        for (int p = 0; p < k; ++p) {
            Complex proj = 0.0;
            for (int r = 0; r < n; ++r) proj += std::conj(cols[p][r]) * cols[k][r];
            for (int r = 0; r < n; ++r) cols[k][r] -= proj * cols[p][r];
        }
        const double nn = norm(cols[k]);
        for (auto& x : cols[k]) x /= nn;
    }
    ComplexMatrix u(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) u.at(r, c) = cols[c][r];
    return u;
}

inline StateVector random_state(SeededRng& rng, int dim) {
    return StateVector::create({dim}, rng.complex_gaussian_unit(dim));
}

}  // namespace melscope::testing
