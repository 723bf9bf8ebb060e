#include "melscope/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace melscope {

ComplexMatrix::ComplexMatrix(int r, int c) : rows(r), cols(c) {
    if (r <= 0 || c <= 0) throw std::invalid_argument("matrix dimensions must be positive");
    entries.assign(static_cast<size_t>(r) * c, Complex(0.0, 0.0));
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

static void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("matrix shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    ComplexMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.entries.size(); ++i) r.entries[i] = a.entries[i] + b.entries[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    ComplexMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.entries.size(); ++i) r.entries[i] = a.entries[i] - b.entries[i];
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
    ComplexMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const Complex aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    }
    return r;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix r = a;
    for (auto& e : r.entries) e *= s;
    return r;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix r(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) r.at(j, i) = std::conj(a.at(i, j));
    return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
    for (int ia = 0; ia < a.rows; ++ia)
        for (int ja = 0; ja < a.cols; ++ja) {
            const Complex v = a.at(ia, ja);
            if (v == 0.0) continue;
            for (int ib = 0; ib < b.rows; ++ib)
                for (int jb = 0; jb < b.cols; ++jb)
                    r.at(ia * b.rows + ib, ja * b.cols + jb) = v * b.at(ib, jb);
        }
    return r;
}

Complex trace(const ComplexMatrix& a) {
    if (!a.square()) throw std::invalid_argument("trace of non-square matrix");
    Complex t = 0.0;
    for (int i = 0; i < a.rows; ++i) t += a.at(i, i);
    return t;
}

double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& e : a.entries) m = std::max(m, std::abs(e));
    return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b);
    double m = 0.0;
    for (size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    for (int i = 0; i < a.rows; ++i)
        for (int j = i; j < a.cols; ++j)
            if (std::abs(a.at(i, j) - std::conj(a.at(j, i))) > tol) return false;
    return true;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
    if (!a.square()) return false;
    return max_abs_diff(adjoint(a) * a, ComplexMatrix::identity(a.rows)) <= tol;
}

bool all_finite(const ComplexMatrix& a) {
    for (const auto& e : a.entries)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

// ---------------------------------------------------------------------------
// StateVector

int StateVector::dim() const {
    int d = 1;
    for (int f : dims) d *= f;
    return d;
}

double norm(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& a : v) s += std::norm(a);
    return std::sqrt(s);
}

static void check_state_shape(const std::vector<int>& dims, const std::vector<Complex>& amps) {
    if (dims.empty()) throw std::invalid_argument("state needs at least one tensor factor");
    long long d = 1;
    for (int f : dims) {
        if (f < 1) throw std::invalid_argument("tensor factor dimensions must be positive");
        d *= f;
    }
    if (d != static_cast<long long>(amps.size()))
        throw std::invalid_argument("amplitude count does not match factor dimensions");
    for (const auto& a : amps)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw std::invalid_argument("state amplitudes must be finite");
}

StateVector StateVector::create(std::vector<int> dims, std::vector<Complex> amps) {
    check_state_shape(dims, amps);
    if (std::abs(norm(amps) - 1.0) > 1e-12)
        throw std::invalid_argument("state vector is not unit norm");
    return StateVector{std::move(dims), std::move(amps)};
}

StateVector StateVector::normalized(std::vector<int> dims, std::vector<Complex> amps) {
    check_state_shape(dims, amps);
    const double n = norm(amps);
    if (n < 1e-300) throw std::invalid_argument("cannot normalize the zero vector");
    for (auto& a : amps) a /= n;
    return StateVector{std::move(dims), std::move(amps)};
}

StateVector StateVector::basis(std::vector<int> dims, int index) {
    StateVector v;
    v.dims = std::move(dims);
    int d = 1;
    for (int f : v.dims) d *= f;
    if (index < 0 || index >= d) throw std::invalid_argument("basis index out of range");
    v.amps.assign(d, Complex(0.0, 0.0));
    v.amps[index] = 1.0;
    return v;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.amps.size() != b.amps.size()) throw std::invalid_argument("state dimension mismatch");
    Complex s = 0.0;
    for (size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * b.amps[i];
    return s;
}

double overlap(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

StateVector tensor(const StateVector& a, const StateVector& b) {
    StateVector r;
    r.dims = a.dims;
    r.dims.insert(r.dims.end(), b.dims.begin(), b.dims.end());
    r.amps.resize(a.amps.size() * b.amps.size());
    size_t k = 0;
    for (const auto& x : a.amps)
        for (const auto& y : b.amps) r.amps[k++] = x * y;
    return r;
}

std::vector<Complex> apply_raw(const ComplexMatrix& m, const std::vector<Complex>& v) {
    if (m.cols != static_cast<int>(v.size()))
        throw std::invalid_argument("operator/state dimension mismatch");
    std::vector<Complex> out(m.rows, Complex(0.0, 0.0));
    for (int i = 0; i < m.rows; ++i) {
        Complex s = 0.0;
        for (int j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

StateVector apply(const ComplexMatrix& m, const StateVector& v) {
    StateVector r = v;
    r.amps = apply_raw(m, v.amps);
    return r;
}

ComplexMatrix projector(const StateVector& v) {
    const int d = static_cast<int>(v.amps.size());
    ComplexMatrix p(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p.at(i, j) = v.amps[i] * std::conj(v.amps[j]);
    return p;
}

// ---------------------------------------------------------------------------
// Partial trace

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
    if (!rho.square()) throw std::invalid_argument("partial_trace: rho must be square");
    long long total = 1;
    for (int f : dims) {
        if (f < 1) throw std::invalid_argument("partial_trace: bad factor dimension");
        total *= f;
    }
    if (total != rho.rows) throw std::invalid_argument("partial_trace: dims do not match rho");
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");

    std::vector<int> keep_sorted = keep;
    std::sort(keep_sorted.begin(), keep_sorted.end());
    keep_sorted.erase(std::unique(keep_sorted.begin(), keep_sorted.end()), keep_sorted.end());
    if (keep_sorted.size() != keep.size())
        throw std::invalid_argument("partial_trace: duplicate factor in keep set");
    for (int k : keep_sorted)
        if (k < 0 || k >= static_cast<int>(dims.size()))
            throw std::invalid_argument("partial_trace: keep index out of range");

    const int nf = static_cast<int>(dims.size());
    // big-endian strides: first factor most significant
    std::vector<long long> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f) stride[f] = stride[f + 1] * dims[f + 1];

    std::vector<int> traced;
    for (int f = 0; f < nf; ++f)
        if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), f)) traced.push_back(f);

    long long dk = 1, dt = 1;
    for (int f : keep_sorted) dk *= dims[f];
    for (int f : traced) dt *= dims[f];

    // decompose a reduced (or traced) flat index into the chosen factors' digits
    auto embed = [&](const std::vector<int>& factors, long long flat) {
        long long full = 0;
        for (int f = static_cast<int>(factors.size()) - 1; f >= 0; --f) {
            const int fac = factors[f];
            full += (flat % dims[fac]) * stride[fac];
            flat /= dims[fac];
        }
        return full;
    };

    ComplexMatrix out(static_cast<int>(dk), static_cast<int>(dk));
    for (long long r = 0; r < dk; ++r) {
        const long long rbase = embed(keep_sorted, r);
        for (long long c = 0; c < dk; ++c) {
            const long long cbase = embed(keep_sorted, c);
            Complex s = 0.0;
            for (long long t = 0; t < dt; ++t) {
                const long long toff = embed(traced, t);
                s += rho.at(static_cast<int>(rbase + toff), static_cast<int>(cbase + toff));
            }
            out.at(static_cast<int>(r), static_cast<int>(c)) = s;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hermitian eigensolver (cyclic Jacobi with complex rotations)

HermitianEigenDecomposition eig_hermitian(const ComplexMatrix& h) {
    if (!h.square()) throw std::invalid_argument("eig_hermitian: matrix must be square");
    if (!all_finite(h)) throw std::invalid_argument("eig_hermitian: non-finite entries");

    const int n = h.rows;
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            asym = std::max(asym, std::abs(h.at(i, j) - std::conj(h.at(j, i))));
    if (asym > 1e-10) throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");

    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a.at(i, j) = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));

    ComplexMatrix q = ComplexMatrix::identity(n);
    const double scale = std::max(1.0, max_abs(a));
    const double stop = 1e-15 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int r = p + 1; r < n; ++r) off = std::max(off, std::abs(a.at(p, r)));
        if (off <= stop) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const Complex apr = a.at(p, r);
                const double g = std::abs(apr);
                if (g <= stop * 1e-2) continue;

                // H_pr block = diag-phase * real symmetric * diag-phase^dagger
                const Complex phase = apr / g;  // h_pr = |h| * phase
                const double app = a.at(p, p).real();
                const double arr = a.at(r, r).real();
                const double tau = (arr - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // 2x2 rotation G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                const Complex gpp = c;
                const Complex gpr = s;
                const Complex grp = -s * std::conj(phase);
                const Complex grr = c * std::conj(phase);

                // A <- G^dagger A G, touching rows/cols p and r only.
                for (int k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p);
                    const Complex akr = a.at(k, r);
                    a.at(k, p) = akp * gpp + akr * grp;
                    a.at(k, r) = akp * gpr + akr * grr;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex apk = a.at(p, k);
                    const Complex ark = a.at(r, k);
                    a.at(p, k) = std::conj(gpp) * apk + std::conj(grp) * ark;
                    a.at(r, k) = std::conj(gpr) * apk + std::conj(grr) * ark;
                }
                a.at(p, r) = 0.0;
                a.at(r, p) = 0.0;
                a.at(p, p) = Complex(a.at(p, p).real(), 0.0);
                a.at(r, r) = Complex(a.at(r, r).real(), 0.0);

                for (int k = 0; k < n; ++k) {
                    const Complex qkp = q.at(k, p);
                    const Complex qkr = q.at(k, r);
                    q.at(k, p) = qkp * gpp + qkr * grp;
                    q.at(k, r) = qkp * gpr + qkr * grr;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i).real() < a.at(j, j).real(); });

    HermitianEigenDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors = ComplexMatrix(n, n);
    for (int c = 0; c < n; ++c) {
        dec.eigenvalues[c] = a.at(order[c], order[c]).real();
        for (int rw = 0; rw < n; ++rw) dec.eigenvectors.at(rw, c) = q.at(rw, order[c]);
    }
    return dec;
}

}  // namespace melscope
