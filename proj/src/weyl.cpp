#include "melscope/weyl.hpp"

#include <cmath>
#include <stdexcept>

namespace melscope {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

Complex root_of_unity(int d, long long k) {
    const double a = kTwoPi * static_cast<double>(((k % d) + d) % d) / d;
    return Complex(std::cos(a), std::sin(a));
}
}  // namespace

BellIndex::BellIndex(int d_, int n_, int m_) : d(d_), n(n_), m(m_) {
    if (d < 2) throw std::invalid_argument("BellIndex: d must be >= 2");
    if (n < 0 || n >= d || m < 0 || m >= d)
        throw std::invalid_argument("BellIndex: n, m must lie in [0, d)");
}

WeylPhase::WeylPhase(int num, int mod) : numerator(((num % mod) + mod) % mod), modulus(mod) {
    if (mod < 1) throw std::invalid_argument("WeylPhase: modulus must be positive");
}

Complex WeylPhase::value() const { return root_of_unity(modulus, numerator); }

ComplexMatrix weyl_u(const BellIndex& idx) {
    ComplexMatrix u(idx.d, idx.d);
    for (int j = 0; j < idx.d; ++j)
        u.at(j, (j + idx.m) % idx.d) = root_of_unity(idx.d, static_cast<long long>(j) * idx.n);
    return u;
}

ComplexMatrix weyl_v(const BellIndex& idx) {
    return adjoint(weyl_u(BellIndex(idx.d, (idx.d - idx.n) % idx.d, idx.m)));
}

StateVector bell_state(const BellIndex& idx) {
    const int d = idx.d;
    std::vector<Complex> amps(static_cast<size_t>(d) * d, Complex(0.0, 0.0));
    const double inv = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        amps[static_cast<size_t>(j) * d + (j + idx.m) % d] =
            inv * root_of_unity(d, static_cast<long long>(j) * idx.n);
    return StateVector::create({d, d}, std::move(amps));
}

std::pair<WeylPhase, BellIndex> compose_u(const BellIndex& a, const BellIndex& b) {
    if (a.d != b.d) throw std::invalid_argument("compose_u: dimension mismatch");
    const int d = a.d;
    return {WeylPhase(((b.m - a.m) * b.n) % d, d),
            BellIndex(d, (d + a.n - b.n) % d, (d + a.m - b.m) % d)};
}

std::pair<WeylPhase, BellIndex> compose_v(const BellIndex& a, const BellIndex& b) {
    if (a.d != b.d) throw std::invalid_argument("compose_v: dimension mismatch");
    const int d = a.d;
    return {WeylPhase(((b.n - a.n) * b.m) % d, d),
            BellIndex(d, (d + a.n - b.n) % d, (d + a.m - b.m) % d)};
}

bool trace_orthogonal(const ComplexMatrix& v1, const ComplexMatrix& v2) {
    if (!v1.square() || !v2.square() || v1.rows != v2.rows)
        throw std::invalid_argument("trace_orthogonal: need equal square matrices");
    return std::abs(trace(adjoint(v1) * v2)) <= 1e-10;
}

TwoQubitCanonicalization two_qubit_canonicalize(const TwoQubitPair& pair) {
    const double beta = 0.5 * (pair.theta + pair.delta);
    const double alpha = 0.5 * (pair.theta - pair.delta);

    TwoQubitCanonicalization out;
    out.u_alice = ComplexMatrix::identity(2);
    out.u_alice.at(1, 1) = Complex(std::cos(beta), std::sin(beta));
    out.v_bob = ComplexMatrix::identity(2);
    out.v_bob.at(1, 1) = Complex(std::cos(alpha), std::sin(alpha));
    const Complex conj_alpha(std::cos(alpha), -std::sin(alpha));
    out.phases = {Complex(1.0, 0.0), conj_alpha, Complex(1.0, 0.0), conj_alpha};
    return out;
}

std::array<StateVector, 4> two_qubit_pair_states(const TwoQubitPair& pair) {
    const Complex et(std::cos(pair.theta), std::sin(pair.theta));
    const Complex ed(std::cos(pair.delta), std::sin(pair.delta));
    const double s = 1.0 / std::sqrt(2.0);
    return {
        StateVector::create({2, 2}, {s, 0.0, 0.0, s * et}),    // |00> + e^it |11>
        StateVector::create({2, 2}, {0.0, s, s * ed, 0.0}),    // |01> + e^id |10>
        StateVector::create({2, 2}, {s, 0.0, 0.0, -s * et}),   // |00> - e^it |11>
        StateVector::create({2, 2}, {0.0, s, -s * ed, 0.0}),   // |01> - e^id |10>
    };
}

}  // namespace melscope
