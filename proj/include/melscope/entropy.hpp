#pragma once

#include <vector>

#include "melscope/linalg.hpp"
#include "melscope/weyl.hpp"

namespace melscope {

struct DensityMatrix {
    int dim = 0;
    ComplexMatrix matrix;

    /// Checked constructor: Hermitian (1e-10), unit trace (1e-10),
    /// eigenvalues >= -1e-10.
    static DensityMatrix create(ComplexMatrix m);
};

/// Tensor factor layout plus a target reordering (new position k holds old
/// factor permutation[k]).
struct CutLayout {
    std::vector<int> factor_dims;
    std::vector<int> permutation;

    /// Four d-dimensional parties in order A,B,C,D rearranged to A,C,B,D.
    static CutLayout acbd(int d) { return CutLayout{{d, d, d, d}, {0, 2, 1, 3}}; }
};

StateVector permute_subsystems(const StateVector& state, const CutLayout& layout);

/// Uniform mixture of |Psi_i x Psi_i> pair states (first factor on parties
/// A,B, second on C,D), expressed in A,C,B,D factor order.  Needs exactly
/// d+1 distinct labels.
DensityMatrix build_rho_states(const std::vector<BellIndex>& set);

/// Mixture over the whole canonical family with the pairs living on (A,C) and
/// (B,D), in the same A,C,B,D global order.  Separable across the AC:BD cut.
DensityMatrix build_rho_separable(int d);

struct RelativeEntropy {
    double value = 0.0;   // bits; meaningful only when !infinite
    bool infinite = false;
    double null_mass = 0.0;  // weight of sigma outside rho's support
};

/// S(sigma || rho) = tr sigma (log2 sigma - log2 rho), with 0 log 0 = 0 and
/// the infinite marker when sigma's support leaks out of rho's.
RelativeEntropy relative_entropy(const DensityMatrix& sigma, const DensityMatrix& rho);
/// Same with rho's eigendecomposition precomputed (sweeps reuse it).
RelativeEntropy relative_entropy(const DensityMatrix& sigma,
                                 const HermitianEigenDecomposition& rho_eig);

struct EntropyBoundResult {
    double value = 0.0;
    double bound = 0.0;  // log2 d
    bool pass = false;
    bool infinite = false;
    double null_mass = 0.0;
};

EntropyBoundResult entropy_bound_check(const std::vector<BellIndex>& set);
/// Reusable separable reference for sweeps over many sets at the same d.
struct SeparableReference {
    int d = 0;
    DensityMatrix rho;
    HermitianEigenDecomposition eig;

    static SeparableReference build(int d);
};
EntropyBoundResult entropy_bound_check(const std::vector<BellIndex>& set,
                                       const SeparableReference& reference);

}  // namespace melscope
