#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "melscope/linalg.hpp"
#include "melscope/rng.hpp"

using namespace melscope;
using melscope::testing::random_hermitian;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x.at(0, 1) = 1.0;
    x.at(1, 0) = 1.0;
    return x;
}

ComplexMatrix pauli_z() {
    ComplexMatrix z(2, 2);
    z.at(0, 0) = 1.0;
    z.at(1, 1) = -1.0;
    return z;
}

}  // namespace

TEST_CASE("kron of identities is the identity") {
    const auto r = kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
    CHECK(max_abs_diff(r, ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("kron index convention") {
    const auto r = kron(pauli_x(), pauli_z());
    // entry (0*2+0, 1*2+0) = X01 * Z00
    CHECK(r.at(0, 2) == Complex(1.0, 0.0));
    CHECK(r.at(0, 0) == Complex(0.0, 0.0));
    CHECK(r.at(1, 3) == Complex(-1.0, 0.0));
}

TEST_CASE("kron shape rule") {
    ComplexMatrix a(2, 3), b(4, 5);
    const auto r = kron(a, b);
    CHECK(r.rows == 8);
    CHECK(r.cols == 15);
}

TEST_CASE("kron is associative on integer-exact inputs") {
    SeededRng rng(42);
    ComplexMatrix a(2, 2), b(3, 2), c(2, 3);
    for (auto* m : {&a, &b, &c})
        for (auto& e : m->entries)
            e = Complex(std::floor(3.0 * rng.uniform()) - 1.0, std::floor(3.0 * rng.uniform()) - 1.0);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) == 0.0);
}

TEST_CASE("partial trace of a two-qubit Bell projector is maximally mixed") {
    const double s = 1.0 / std::sqrt(2.0);
    const StateVector phi_plus = StateVector::create({2, 2}, {s, 0.0, 0.0, s});
    const auto reduced = partial_trace(projector(phi_plus), {2, 2}, {0});
    auto half = ComplexMatrix::identity(2);
    for (auto& e : half.entries) e *= 0.5;
    CHECK(max_abs_diff(reduced, half) < 1e-14);
}

TEST_CASE("partial trace of a product is the factor times the other trace") {
    SeededRng rng(7);
    ComplexMatrix rho(3, 3), sigma(4, 4);
    for (auto& e : rho.entries) e = Complex(rng.normal(), rng.normal());
    for (auto& e : sigma.entries) e = Complex(rng.normal(), rng.normal());
    const auto reduced = partial_trace(kron(rho, sigma), {3, 4}, {0});
    const auto expected = trace(sigma) * rho;
    CHECK(max_abs_diff(reduced, expected) < 1e-12);
}

TEST_CASE("partial trace against a direct summation oracle") {
    // |Psi_12> of 3x3 built from the defining formula, nothing shared with
    // the library construction
    const int d = 3, n = 1, m = 2;
    std::vector<Complex> amps(9, Complex(0.0, 0.0));
    for (int j = 0; j < d; ++j) {
        const double a = 2.0 * M_PI * j * n / d;
        amps[j * d + (j + m) % d] = Complex(std::cos(a), std::sin(a)) / std::sqrt(3.0);
    }
    const StateVector psi = StateVector::create({3, 3}, amps);
    const auto rho = projector(psi);

    // oracle: reduced[b, b'] = sum_a rho[(a,b), (a,b')]
    ComplexMatrix oracle(3, 3);
    for (int b = 0; b < 3; ++b)
        for (int bp = 0; bp < 3; ++bp) {
            Complex s = 0.0;
            for (int a = 0; a < 3; ++a) s += rho.at(a * 3 + b, a * 3 + bp);
            oracle.at(b, bp) = s;
        }

    const auto reduced = partial_trace(rho, {3, 3}, {1});
    CHECK(max_abs_diff(reduced, oracle) < 1e-14);
    auto third = ComplexMatrix::identity(3);
    for (auto& e : third.entries) e /= 3.0;
    CHECK(max_abs_diff(reduced, third) < 1e-12);
}

TEST_CASE("partial trace preserves trace") {
    SeededRng rng(11);
    ComplexMatrix rho(12, 12);
    for (auto& e : rho.entries) e = Complex(rng.normal(), rng.normal());
    const auto reduced = partial_trace(rho, {2, 3, 2}, {0, 2});
    CHECK(std::abs(trace(reduced) - trace(rho)) < 1e-12);
}

TEST_CASE("partial trace rejects bad inputs") {
    ComplexMatrix rho(4, 4);
    CHECK_THROWS_AS(partial_trace(rho, {2, 3}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {2, 2}, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, {2, 2}, {2}), std::invalid_argument);
}

TEST_CASE("eig of a diagonal matrix sorts ascending") {
    ComplexMatrix h(3, 3);
    h.at(0, 0) = 3.0;
    h.at(1, 1) = 1.0;
    h.at(2, 2) = 2.0;
    const auto dec = eig_hermitian(h);
    CHECK(dec.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dec.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(dec.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("eig of the flip operator") {
    const auto dec = eig_hermitian(pauli_x());
    CHECK(dec.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(dec.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eig reconstruction on a random 81x81 Hermitian") {
    SeededRng rng(2024);
    const auto h = random_hermitian(rng, 81);
    const auto dec = eig_hermitian(h);

    const int n = 81;
    ComplexMatrix lam(n, n);
    for (int i = 0; i < n; ++i) lam.at(i, i) = dec.eigenvalues[i];
    const auto rebuilt = dec.eigenvectors * lam * adjoint(dec.eigenvectors);
    CHECK(max_abs_diff(rebuilt, h) < 1e-10);
    CHECK(max_abs_diff(adjoint(dec.eigenvectors) * dec.eigenvectors,
                       ComplexMatrix::identity(n)) < 1e-10);

    double sum = 0.0;
    for (double l : dec.eigenvalues) sum += l;
    CHECK(std::abs(sum - trace(h).real()) < 1e-10);
}

TEST_CASE("eig rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m.at(0, 1) = 1.0;  // strictly upper triangular
    CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
    ComplexMatrix rect(2, 3);
    CHECK_THROWS_AS(eig_hermitian(rect), std::invalid_argument);
}

TEST_CASE("density matrix eigenvalues stay in [0, 1]") {
    SeededRng rng(5);
    const int n = 9;
    ComplexMatrix rho(n, n);
    for (int t = 0; t < 3; ++t) {
        const auto v = rng.complex_gaussian_unit(n);
        const auto p = projector(StateVector::create({n}, v));
        for (size_t i = 0; i < rho.entries.size(); ++i) rho.entries[i] += p.entries[i] / 3.0;
    }
    const auto dec = eig_hermitian(rho);
    CHECK(dec.eigenvalues.front() >= -1e-10);
    CHECK(dec.eigenvalues.back() <= 1.0 + 1e-10);
}

TEST_CASE("state vector validation") {
    CHECK_THROWS_AS(StateVector::create({2}, {Complex(1.0, 0.0), Complex(1.0, 0.0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(StateVector::create({2}, {Complex(1.0, 0.0)}), std::invalid_argument);
    const auto v = StateVector::normalized({2}, {Complex(3.0, 0.0), Complex(4.0, 0.0)});
    CHECK(std::abs(v.amps[0].real() - 0.6) < 1e-15);
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(StateVector::normalized({1}, {Complex(nan, 0.0)}), std::invalid_argument);
}
