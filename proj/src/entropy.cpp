#include "melscope/entropy.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace melscope {

namespace {
constexpr double kSupportTol = 1e-12;  // eigenvalues at or below count as zero
constexpr double kNullMassTol = 1e-10;
}  // namespace

DensityMatrix DensityMatrix::create(ComplexMatrix m) {
    if (!m.square()) throw std::invalid_argument("DensityMatrix: matrix must be square");
    if (!is_hermitian(m, 1e-10)) throw std::invalid_argument("DensityMatrix: not Hermitian");
    if (std::abs(trace(m) - Complex(1.0, 0.0)) > 1e-10)
        throw std::invalid_argument("DensityMatrix: trace must be 1");
    const auto dec = eig_hermitian(m);
    if (dec.eigenvalues.front() < -1e-10)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    DensityMatrix rho;
    rho.dim = m.rows;
    rho.matrix = std::move(m);
    return rho;
}

StateVector permute_subsystems(const StateVector& state, const CutLayout& layout) {
    if (state.dims != layout.factor_dims)
        throw std::invalid_argument("permute_subsystems: state dims do not match layout");
    const int nf = static_cast<int>(layout.factor_dims.size());
    std::vector<bool> hit(nf, false);
    for (int p : layout.permutation) {
        if (p < 0 || p >= nf || hit[p])
            throw std::invalid_argument("permute_subsystems: permutation is not a bijection");
        hit[p] = true;
    }

    std::vector<int> new_dims(nf);
    for (int k = 0; k < nf; ++k) new_dims[k] = layout.factor_dims[layout.permutation[k]];

    // big-endian strides in the old layout
    std::vector<long long> old_stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) old_stride[f] = old_stride[f + 1] * layout.factor_dims[f + 1];

    StateVector out;
    out.dims = new_dims;
    out.amps.assign(state.amps.size(), Complex(0.0, 0.0));
    const long long total = static_cast<long long>(state.amps.size());
    for (long long g = 0; g < total; ++g) {
        long long rest = g;
        long long src = 0;
        for (int k = nf - 1; k >= 0; --k) {
            const int digit = static_cast<int>(rest % new_dims[k]);
            rest /= new_dims[k];
            src += digit * old_stride[layout.permutation[k]];
        }
        out.amps[g] = state.amps[src];
    }
    return out;
}

DensityMatrix build_rho_states(const std::vector<BellIndex>& set) {
    if (set.empty()) throw std::invalid_argument("build_rho_states: empty set");
    const int d = set[0].d;
    if (static_cast<int>(set.size()) != d + 1)
        throw std::invalid_argument("build_rho_states: need exactly d+1 members");
    std::set<std::pair<int, int>> seen;
    for (const auto& b : set) {
        if (b.d != d) throw std::invalid_argument("build_rho_states: mixed dimensions");
        if (!seen.insert({b.n, b.m}).second)
            throw std::invalid_argument("build_rho_states: duplicate member");
    }

    const CutLayout layout = CutLayout::acbd(d);
    const int dim = d * d * d * d;
    ComplexMatrix rho(dim, dim);
    for (const auto& b : set) {
        const StateVector pair_state = tensor(bell_state(b), bell_state(b));  // A,B,C,D
        const StateVector reordered = permute_subsystems(pair_state, layout); // A,C,B,D
        const ComplexMatrix p = projector(reordered);
        for (size_t i = 0; i < rho.entries.size(); ++i)
            rho.entries[i] += p.entries[i] / static_cast<double>(d + 1);
    }
    return DensityMatrix::create(std::move(rho));
}

DensityMatrix build_rho_separable(int d) {
    if (d < 2) throw std::invalid_argument("build_rho_separable: d must be >= 2");
    const int dim = d * d * d * d;
    ComplexMatrix rho(dim, dim);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            // pairs already live on (A,C) and (B,D) in the A,C,B,D global order
            const StateVector v = tensor(bell_state(BellIndex(d, n, m)),
                                         bell_state(BellIndex(d, n, m)));
            const ComplexMatrix p = projector(v);
            for (size_t i = 0; i < rho.entries.size(); ++i)
                rho.entries[i] += p.entries[i] / static_cast<double>(d * d);
        }
    }
    return DensityMatrix::create(std::move(rho));
}

RelativeEntropy relative_entropy(const DensityMatrix& sigma,
                                 const HermitianEigenDecomposition& rho_eig) {
    const int n = sigma.dim;
    if (static_cast<int>(rho_eig.eigenvalues.size()) != n)
        throw std::invalid_argument("relative_entropy: dimension mismatch");

    const auto sig_eig = eig_hermitian(sigma.matrix);
    double entropy = 0.0;  // -S(sigma)
    for (double l : sig_eig.eigenvalues)
        if (l > kSupportTol) entropy += l * std::log2(l);

    // q_k = <v_k| sigma |v_k> for rho's eigenvectors v_k
    RelativeEntropy out;
    double cross = 0.0;
    for (int k = 0; k < n; ++k) {
        std::vector<Complex> v(n);
        for (int r = 0; r < n; ++r) v[r] = rho_eig.eigenvectors.at(r, k);
        const auto sv = apply_raw(sigma.matrix, v);
        double q = 0.0;
        for (int r = 0; r < n; ++r) q += (std::conj(v[r]) * sv[r]).real();
        if (rho_eig.eigenvalues[k] > kSupportTol)
            cross += q * std::log2(rho_eig.eigenvalues[k]);
        else
            out.null_mass += q;
    }

    if (out.null_mass > kNullMassTol) {
        out.infinite = true;
        return out;
    }
    out.value = entropy - cross;
    return out;
}

RelativeEntropy relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho) {
    if (sigma.dim != rho.dim) throw std::invalid_argument("relative_entropy: dimension mismatch");
    return relative_entropy(sigma, eig_hermitian(rho.matrix));
}

SeparableReference SeparableReference::build(int d) {
    SeparableReference ref;
    ref.d = d;
    ref.rho = build_rho_separable(d);
    ref.eig = eig_hermitian(ref.rho.matrix);
    return ref;
}

EntropyBoundResult entropy_bound_check(const std::vector<BellIndex>& set,
                                       const SeparableReference& reference) {
    if (set.empty() || set[0].d != reference.d)
        throw std::invalid_argument("entropy_bound_check: set/reference dimension mismatch");
    const int d = reference.d;
    const DensityMatrix sigma = build_rho_states(set);
    const RelativeEntropy re = relative_entropy(sigma, reference.eig);

    EntropyBoundResult out;
    out.bound = std::log2(static_cast<double>(d));
    out.infinite = re.infinite;
    out.null_mass = re.null_mass;
    if (re.infinite) {
        out.pass = false;
        return out;
    }
    out.value = re.value;
    out.pass = re.value < out.bound - 1e-9;
    return out;
}

EntropyBoundResult entropy_bound_check(const std::vector<BellIndex>& set) {
    if (set.empty()) throw std::invalid_argument("entropy_bound_check: empty set");
    return entropy_bound_check(set, SeparableReference::build(set[0].d));
}

}  // namespace melscope
