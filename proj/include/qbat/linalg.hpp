// linalg.hpp — Dense Hermitian kernel: eigendecompositions, PSD square roots,
// norms, partial trace/transpose, local-operator embedding, and the state
// types (HilbertSpec, Ket, DensityMatrix) everything else builds on.

#pragma once

#include "qbat/common.hpp"

#include <vector>

namespace qbat {

// Ordered cell dimensions of a multipartite system. Cell 0 is the
// slowest-varying (most significant) index of the computational basis.
class HilbertSpec {
public:
    static constexpr long kDefaultMaxDim = 1L << 14;

    HilbertSpec(std::initializer_list<int> dims) : HilbertSpec(std::vector<int>(dims)) {}
    explicit HilbertSpec(std::vector<int> dims, long max_total_dim = kDefaultMaxDim);

    int cells() const { return static_cast<int>(dims_.size()); }
    int dim(int cell) const { return dims_.at(static_cast<std::size_t>(cell)); }
    const std::vector<int>& dims() const { return dims_; }
    long total_dim() const { return total_; }

    // Column stride of a cell in the computational-basis index.
    long stride(int cell) const;

    bool operator==(const HilbertSpec& rhs) const { return dims_ == rhs.dims_; }
    bool operator!=(const HilbertSpec& rhs) const { return !(*this == rhs); }

private:
    std::vector<int> dims_;
    long total_ = 1;
};

struct Eigendecomposition {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns, values(k) <-> vectors.col(k)
};

// Relative entrywise Hermiticity check: max|A - A^dag| <= tol * max(1, ||A||_F).
bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

// Throws InvalidOperator when the input fails is_hermitian.
Eigendecomposition hermitian_eigendecomposition(const Matrix& a);

// PSD square root with eigenvalues in [floor, 0) clamped to zero and
// anything below `floor` rejected as NotPositiveSemidefinite.
Matrix psd_sqrt_with_floor(const Matrix& rho, double floor);
Matrix psd_sqrt(const Matrix& rho);

// Largest (signed) eigenvalue.
double operator_norm(const Matrix& a);

// Sum of absolute eigenvalues.
double trace_norm(const Matrix& a);

Matrix partial_transpose(const Matrix& rho, const HilbertSpec& spec,
                         const std::vector<int>& subset);

// Reduced matrix on the kept cells (ascending cell order).
Matrix partial_trace(const Matrix& rho, const HilbertSpec& spec,
                     const std::vector<int>& keep);

// Reduced density matrix of a pure state without forming the full projector.
Matrix ket_reduced_density(const Vector& amplitudes, const HilbertSpec& spec,
                           const std::vector<int>& keep);

// op on `cell`, identity everywhere else, in the fixed cell order of spec.
Matrix embed_local(const Matrix& op, const HilbertSpec& spec, int cell);

class Ket {
public:
    Ket(Vector amplitudes, HilbertSpec spec);

    const Vector& amplitudes() const { return amps_; }
    const HilbertSpec& spec() const { return spec_; }
    long dim() const { return spec_.total_dim(); }

    Matrix projector() const { return amps_ * amps_.adjoint(); }

private:
    Vector amps_;
    HilbertSpec spec_;
};

class DensityMatrix {
public:
    DensityMatrix(Matrix entries, HilbertSpec spec);
    static DensityMatrix from_ket(const Ket& psi);

    const Matrix& matrix() const { return mat_; }
    const HilbertSpec& spec() const { return spec_; }
    long dim() const { return spec_.total_dim(); }

private:
    Matrix mat_;
    HilbertSpec spec_;
};

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);
Matrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& subset);

} // namespace qbat
