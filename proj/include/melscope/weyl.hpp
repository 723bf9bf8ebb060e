#pragma once

#include <array>
#include <utility>

#include "melscope/linalg.hpp"

namespace melscope {

/// Label (n, m) of a canonical maximally entangled state of d x d.
struct BellIndex {
    int d = 2;
    int n = 0;
    int m = 0;

    BellIndex() = default;
    BellIndex(int d_, int n_, int m_);

    bool operator==(const BellIndex& o) const { return d == o.d && n == o.n && m == o.m; }
};

/// exp[2*pi*i * numerator / modulus], numerator reduced mod modulus.
struct WeylPhase {
    int numerator = 0;
    int modulus = 1;

    WeylPhase() = default;
    WeylPhase(int num, int mod);
    Complex value() const;
};

ComplexMatrix weyl_u(const BellIndex& idx);
ComplexMatrix weyl_v(const BellIndex& idx);
StateVector bell_state(const BellIndex& idx);

/// U_a * U_b^dagger = phase * U_result (exact operator identity).
std::pair<WeylPhase, BellIndex> compose_u(const BellIndex& a, const BellIndex& b);
/// V_a * V_b^dagger = phase * V_result.
std::pair<WeylPhase, BellIndex> compose_v(const BellIndex& a, const BellIndex& b);

/// |Tr(v1^dagger v2)| <= 1e-10; equivalent to orthogonality of the
/// corresponding (I x V) Psi_00 states.
bool trace_orthogonal(const ComplexMatrix& v1, const ComplexMatrix& v2);

/// Angle parameters of a two-qubit maximally entangled pair
/// (|00'> + e^{i theta}|11'>)/sqrt2, (|01'> + e^{i delta}|10'>)/sqrt2.
struct TwoQubitPair {
    double theta = 0.0;
    double delta = 0.0;
};

struct TwoQubitCanonicalization {
    ComplexMatrix u_alice;          // diag(1, e^{i beta}), beta = (theta+delta)/2
    ComplexMatrix v_bob;            // diag(1, e^{i alpha}), alpha = (theta-delta)/2
    std::array<Complex, 4> phases;  // per-state phases, order (0,0),(0,1),(1,0),(1,1)
};

/// Local unitary carrying the canonical two-qubit family onto the four states
/// generated by the pair (the pair plus its sign-flipped partners).
TwoQubitCanonicalization two_qubit_canonicalize(const TwoQubitPair& pair);

/// The four states the canonicalization targets, order matching phases[].
std::array<StateVector, 4> two_qubit_pair_states(const TwoQubitPair& pair);

}  // namespace melscope
