#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "melscope/entropy.hpp"

using namespace melscope;

namespace {

std::vector<BellIndex> indices(int d, std::initializer_list<std::pair<int, int>> idx) {
    std::vector<BellIndex> out;
    for (const auto& [n, m] : idx) out.push_back(BellIndex(d, n, m));
    return out;
}

/// Independent construction of the pair-state mixture directly in the
/// A,C,B,D order, no permutation machinery involved.
ComplexMatrix direct_acbd_mixture(const std::vector<BellIndex>& set) {
    const int d = set[0].d;
    const int dim = d * d * d * d;
    ComplexMatrix rho(dim, dim);
    for (const auto& b : set) {
        const auto psi = bell_state(b);
        std::vector<Complex> v(dim);
        for (int a = 0; a < d; ++a)
            for (int c = 0; c < d; ++c)
                for (int bb = 0; bb < d; ++bb)
                    for (int dd = 0; dd < d; ++dd)
                        v[((a * d + c) * d + bb) * d + dd] =
                            psi.amps[a * d + bb] * psi.amps[c * d + dd];
        const auto p = projector(StateVector::create({d, d, d, d}, v));
        for (size_t i = 0; i < rho.entries.size(); ++i)
            rho.entries[i] += p.entries[i] / static_cast<double>(set.size());
    }
    return rho;
}

DensityMatrix mixture_without_size_guard(const std::vector<BellIndex>& set) {
    return DensityMatrix::create(direct_acbd_mixture(set));
}

}  // namespace

TEST_CASE("permute_subsystems identity and basis action") {
    SeededRng rng(8);
    const auto v = StateVector::create({2, 2, 2, 2}, rng.complex_gaussian_unit(16));

    const CutLayout identity{{2, 2, 2, 2}, {0, 1, 2, 3}};
    const auto same = permute_subsystems(v, identity);
    for (int i = 0; i < 16; ++i) CHECK(same.amps[i] == v.amps[i]);

    // |1,0,1,0> -> |1,1,0,0| under ABCD -> ACBD
    const auto basis = StateVector::basis({2, 2, 2, 2}, 0b1010);
    const auto moved = permute_subsystems(basis, CutLayout::acbd(2));
    CHECK(moved.amps[0b1100] == Complex(1.0, 0.0));
}

TEST_CASE("permute then un-permute is the identity") {
    SeededRng rng(9);
    const auto a = StateVector::create({3, 3}, rng.complex_gaussian_unit(9));
    const auto b = StateVector::create({3, 3}, rng.complex_gaussian_unit(9));
    const auto joint = tensor(a, b);
    const auto once = permute_subsystems(joint, CutLayout::acbd(3));
    const auto twice = permute_subsystems(once, CutLayout::acbd(3));
    CHECK(overlap(twice, joint) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(norm(once.amps) - 1.0) < 1e-14);
}

TEST_CASE("permute_subsystems validates the permutation") {
    const auto v = StateVector::basis({2, 2}, 0);
    CHECK_THROWS_AS(permute_subsystems(v, CutLayout{{2, 2}, {0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(permute_subsystems(v, CutLayout{{2, 3}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("pair-state mixture matches the direct construction") {
    const auto set = indices(2, {{0, 0}, {1, 0}, {0, 1}});
    const auto built = build_rho_states(set);
    CHECK(max_abs_diff(built.matrix, direct_acbd_mixture(set)) <= 1e-12);
}

TEST_CASE("pair-state mixture spectrum") {
    const auto set = indices(2, {{0, 0}, {1, 0}, {0, 1}});
    const auto rho = build_rho_states(set);
    CHECK(rho.dim == 16);
    CHECK(std::abs(trace(rho.matrix) - Complex(1.0, 0.0)) <= 1e-12);

    // purity of a uniform mixture of three orthogonal pure states
    const auto sq = rho.matrix * rho.matrix;
    CHECK(trace(sq).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    const auto dec = eig_hermitian(rho.matrix);
    int nonzero = 0;
    for (double l : dec.eigenvalues)
        if (l > 1e-10) {
            ++nonzero;
            CHECK(l == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
        }
    CHECK(nonzero == 3);
}

TEST_CASE("d=3 mixture has a flat rank-4 spectrum") {
    const auto rho = build_rho_states(indices(3, {{0, 0}, {1, 0}, {0, 1}, {2, 2}}));
    CHECK(rho.dim == 81);
    const auto dec = eig_hermitian(rho.matrix);
    int nonzero = 0;
    for (double l : dec.eigenvalues)
        if (l > 1e-10) {
            ++nonzero;
            CHECK(l == doctest::Approx(0.25).epsilon(1e-9));
        }
    CHECK(nonzero == 4);
}

TEST_CASE("build_rho_states validates the set") {
    CHECK_THROWS_AS(build_rho_states(indices(2, {{0, 0}, {1, 0}})), std::invalid_argument);
    CHECK_THROWS_AS(build_rho_states(indices(2, {{0, 0}, {0, 0}, {1, 0}})),
                    std::invalid_argument);
}

TEST_CASE("separable reference properties") {
    const auto rho = build_rho_separable(2);
    CHECK(rho.dim == 16);
    CHECK(std::abs(trace(rho.matrix) - Complex(1.0, 0.0)) <= 1e-12);
    const auto sq = rho.matrix * rho.matrix;
    CHECK(trace(sq).real() == doctest::Approx(0.25).epsilon(1e-10));

    // invariant under swapping the (A,C) block with the (B,D) block
    const int d = 2, dim = 16;
    ComplexMatrix swap(dim, dim);
    for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c)
            for (int b = 0; b < d; ++b)
                for (int dd = 0; dd < d; ++dd)
                    swap.at(((b * d + dd) * d + a) * d + c, ((a * d + c) * d + b) * d + dd) = 1.0;
    CHECK(max_abs_diff(swap * rho.matrix * adjoint(swap), rho.matrix) <= 1e-12);
}

TEST_CASE("relative entropy of identical states vanishes") {
    const auto rho = build_rho_separable(2);
    const auto re = relative_entropy(rho, rho);
    CHECK_FALSE(re.infinite);
    CHECK(std::abs(re.value) <= 1e-9);
}

TEST_CASE("relative entropy against the maximally mixed state") {
    const auto p = projector(bell_state(BellIndex(2, 0, 0)));
    const auto sigma = DensityMatrix::create(p);
    ComplexMatrix mixed = ComplexMatrix::identity(4);
    for (auto& e : mixed.entries) e *= 0.25;
    const auto re = relative_entropy(sigma, DensityMatrix::create(mixed));
    CHECK_FALSE(re.infinite);
    CHECK(re.value == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("disjoint supports give the infinite marker") {
    const auto a = DensityMatrix::create(projector(bell_state(BellIndex(2, 0, 0))));
    const auto b = DensityMatrix::create(projector(bell_state(BellIndex(2, 1, 0))));
    const auto re = relative_entropy(a, b);
    CHECK(re.infinite);
    CHECK(re.null_mass > 0.9);
}

TEST_CASE("relative entropy is nonnegative on full-rank inputs") {
    SeededRng rng(77);
    const int n = 6;
    auto make_density = [&](int rank_states) {
        ComplexMatrix m(n, n);
        for (int t = 0; t < rank_states; ++t) {
            const auto p = projector(StateVector::create({n}, rng.complex_gaussian_unit(n)));
            for (size_t i = 0; i < m.entries.size(); ++i)
                m.entries[i] += p.entries[i] / static_cast<double>(rank_states);
        }
        // mix with a little identity so the support is full
        for (int i = 0; i < n; ++i) m.at(i, i) += 0.05;
        const Complex tr = trace(m);
        for (auto& e : m.entries) e /= tr.real();
        return DensityMatrix::create(m);
    };
    for (int t = 0; t < 4; ++t) {
        const auto sigma = make_density(3);
        const auto rho = make_density(4);
        const auto re = relative_entropy(sigma, rho);
        CHECK_FALSE(re.infinite);
        CHECK(re.value >= -1e-9);
    }
}

TEST_CASE("entropy bound at d=2: value is log2(4/3) and passes") {
    const auto out = entropy_bound_check(indices(2, {{0, 0}, {1, 0}, {0, 1}}));
    CHECK_FALSE(out.infinite);
    CHECK(out.pass);
    CHECK(out.bound == doctest::Approx(1.0));
    // both spectra are flat on their supports, giving exactly log2(d^2/(d+1))
    CHECK(out.value == doctest::Approx(std::log2(4.0 / 3.0)).epsilon(1e-9));
}

TEST_CASE("every d=2 triple passes the bound") {
    const SeparableReference ref = SeparableReference::build(2);
    const int all[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int skip = 0; skip < 4; ++skip) {
        std::vector<BellIndex> set;
        for (int i = 0; i < 4; ++i)
            if (i != skip) set.push_back(BellIndex(2, all[i][0], all[i][1]));
        const auto out = entropy_bound_check(set, ref);
        CHECK(out.pass);
        CHECK(out.value < 1.0 - 1e-9);
    }
}

TEST_CASE("the full d=2 family coincides with the separable reference") {
    const auto sigma = mixture_without_size_guard(
        indices(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
    const auto rho = build_rho_separable(2);
    CHECK(max_abs_diff(sigma.matrix, rho.matrix) <= 1e-12);
    const auto re = relative_entropy(sigma, rho);
    CHECK_FALSE(re.infinite);
    CHECK(std::abs(re.value) <= 1e-9);
}

TEST_CASE("at d=3 the pair mixture leaks outside the separable support") {
    // every |Psi_nm x Psi_nm| pair state carries exactly 1/d of its mass
    // inside the separable reference's range when d is odd, so the bound
    // computation reports the infinite marker
    const auto out = entropy_bound_check(indices(3, {{0, 0}, {1, 0}, {0, 1}, {2, 2}}));
    CHECK(out.infinite);
    CHECK_FALSE(out.pass);
    CHECK(out.null_mass == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("density matrix validation") {
    ComplexMatrix not_normalized = ComplexMatrix::identity(2);
    CHECK_THROWS_AS(DensityMatrix::create(not_normalized), std::invalid_argument);

    ComplexMatrix negative(2, 2);
    negative.at(0, 0) = 1.5;
    negative.at(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix::create(negative), std::invalid_argument);
}
