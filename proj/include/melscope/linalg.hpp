#pragma once

#include <complex>
#include <vector>

namespace melscope {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> entries;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c);

    static ComplexMatrix identity(int n);

    Complex& at(int r, int c) { return entries[static_cast<size_t>(r) * cols + c]; }
    const Complex& at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }
    bool square() const { return rows == cols; }
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
Complex trace(const ComplexMatrix& a);

double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& a, double tol);
bool is_unitary(const ComplexMatrix& a, double tol);
bool all_finite(const ComplexMatrix& a);

/// Unit vector on a tensor product space.  dims lists the factor dimensions;
/// the first factor is the most significant digit of the flat index.
struct StateVector {
    std::vector<int> dims;
    std::vector<Complex> amps;

    int dim() const;

    /// Checked constructor: validates shape, finiteness and unit norm (1e-12).
    static StateVector create(std::vector<int> dims, std::vector<Complex> amps);
    /// Same but rescales the amplitudes to unit norm first.
    static StateVector normalized(std::vector<int> dims, std::vector<Complex> amps);
    /// Computational basis vector |index> on the given factors.
    static StateVector basis(std::vector<int> dims, int index);
};

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);
double norm(const std::vector<Complex>& v);
/// |<a|b>|, the phase-insensitive overlap.
double overlap(const StateVector& a, const StateVector& b);
StateVector tensor(const StateVector& a, const StateVector& b);
/// m acting on the full space of v (m must be dim() x dim()).
StateVector apply(const ComplexMatrix& m, const StateVector& v);
std::vector<Complex> apply_raw(const ComplexMatrix& m, const std::vector<Complex>& v);
/// |v><v| as a dense matrix.
ComplexMatrix projector(const StateVector& v);

/// Reduced operator on the kept factors (ascending factor indices, order preserved).
ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep);

struct HermitianEigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, orthonormal
};

/// Cyclic Jacobi eigensolver for Hermitian matrices.  The input is symmetrized
/// as (H + H^dagger)/2; asymmetry beyond 1e-10 is an error.
HermitianEigenDecomposition eig_hermitian(const ComplexMatrix& h);

}  // namespace melscope
