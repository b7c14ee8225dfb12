#include "qbat/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qbat {

namespace {

std::vector<int> sorted_unique_cells(const std::vector<int>& cells, int n_cells,
                                     const char* what) {
    if (cells.empty()) {
        throw InvalidPartition(std::string(what) + ": empty cell subset");
    }
    std::set<int> seen;
    for (int c : cells) {
        if (c < 0 || c >= n_cells) {
            std::ostringstream os;
            os << what << ": cell index " << c << " out of range [0, " << n_cells << ")";
            throw InvalidPartition(os.str());
        }
        if (!seen.insert(c).second) {
            std::ostringstream os;
            os << what << ": duplicate cell index " << c;
            throw InvalidPartition(os.str());
        }
    }
    return {seen.begin(), seen.end()};
}

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw DimensionMismatch(std::string(what) + ": operator must be square and nonempty");
    }
}

void require_dim(const Matrix& a, long dim, const char* what) {
    require_square(a, what);
    if (a.rows() != dim) {
        std::ostringstream os;
        os << what << ": dimension " << a.rows() << " does not match spec dimension " << dim;
        throw DimensionMismatch(os.str());
    }
}

// Digits of a computational-basis index, cell 0 slowest-varying.
void decompose_index(long idx, const HilbertSpec& spec, std::vector<int>& digits) {
    for (int i = spec.cells() - 1; i >= 0; --i) {
        const int n = spec.dim(i);
        digits[static_cast<std::size_t>(i)] = static_cast<int>(idx % n);
        idx /= n;
    }
}

} // namespace

HilbertSpec::HilbertSpec(std::vector<int> dims, long max_total_dim) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw InvalidParameter("HilbertSpec: at least one cell required");
    }
    for (int n : dims_) {
        if (n < 2) {
            throw InvalidParameter("HilbertSpec: every cell dimension must be >= 2");
        }
        total_ *= n;
        if (total_ > max_total_dim) {
            std::ostringstream os;
            os << "HilbertSpec: total dimension exceeds maximum " << max_total_dim;
            throw InvalidParameter(os.str());
        }
    }
}

long HilbertSpec::stride(int cell) const {
    long s = 1;
    for (int j = cells() - 1; j > cell; --j) {
        s *= dim(j);
    }
    return s;
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    const double scale = std::max(1.0, a.norm());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

Eigendecomposition hermitian_eigendecomposition(const Matrix& a) {
    require_square(a, "hermitian_eigendecomposition");
    if (!is_hermitian(a)) {
        throw InvalidOperator("hermitian_eigendecomposition: input is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw InvalidOperator("hermitian_eigendecomposition: solver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix psd_sqrt_with_floor(const Matrix& rho, double floor) {
    auto eig = hermitian_eigendecomposition(rho);
    RealVector roots(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        double lambda = eig.values(k);
        if (lambda < floor) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << lambda << " below clamp window " << floor;
            throw NotPositiveSemidefinite(os.str());
        }
        roots(k) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

Matrix psd_sqrt(const Matrix& rho) {
    return psd_sqrt_with_floor(rho, kPsdClampFloor);
}

double operator_norm(const Matrix& a) {
    auto eig = hermitian_eigendecomposition(a);
    return eig.values(eig.values.size() - 1);
}

double trace_norm(const Matrix& a) {
    auto eig = hermitian_eigendecomposition(a);
    return eig.values.cwiseAbs().sum();
}

Matrix partial_transpose(const Matrix& rho, const HilbertSpec& spec,
                         const std::vector<int>& subset) {
    const long d = spec.total_dim();
    require_dim(rho, d, "partial_transpose");
    auto cells = sorted_unique_cells(subset, spec.cells(), "partial_transpose");
    if (static_cast<int>(cells.size()) == spec.cells()) {
        throw InvalidPartition("partial_transpose: subset must be a proper subset of cells");
    }

    std::vector<char> flagged(static_cast<std::size_t>(spec.cells()), 0);
    for (int c : cells) {
        flagged[static_cast<std::size_t>(c)] = 1;
    }

    Matrix out(d, d);
    std::vector<int> rd(static_cast<std::size_t>(spec.cells()));
    std::vector<int> cd(static_cast<std::size_t>(spec.cells()));
    for (long r = 0; r < d; ++r) {
        decompose_index(r, spec, rd);
        for (long c = 0; c < d; ++c) {
            decompose_index(c, spec, cd);
            long rr = 0;
            long cc = 0;
            for (int i = 0; i < spec.cells(); ++i) {
                const auto k = static_cast<std::size_t>(i);
                const int n = spec.dim(i);
                const int rdig = flagged[k] ? cd[k] : rd[k];
                const int cdig = flagged[k] ? rd[k] : cd[k];
                rr = rr * n + rdig;
                cc = cc * n + cdig;
            }
            out(rr, cc) = rho(r, c);
        }
    }
    return out;
}

Matrix partial_trace(const Matrix& rho, const HilbertSpec& spec,
                     const std::vector<int>& keep) {
    const long d = spec.total_dim();
    require_dim(rho, d, "partial_trace");
    auto kept = sorted_unique_cells(keep, spec.cells(), "partial_trace");

    long dk = 1;
    for (int c : kept) {
        dk *= spec.dim(c);
    }

    std::vector<char> is_kept(static_cast<std::size_t>(spec.cells()), 0);
    for (int c : kept) {
        is_kept[static_cast<std::size_t>(c)] = 1;
    }

    // Kept/traced sub-indices of every basis index, computed once.
    std::vector<long> kept_part(static_cast<std::size_t>(d));
    std::vector<long> rest_part(static_cast<std::size_t>(d));
    std::vector<int> digits(static_cast<std::size_t>(spec.cells()));
    for (long idx = 0; idx < d; ++idx) {
        decompose_index(idx, spec, digits);
        long k = 0;
        long r = 0;
        for (int i = 0; i < spec.cells(); ++i) {
            const auto s = static_cast<std::size_t>(i);
            if (is_kept[s]) {
                k = k * spec.dim(i) + digits[s];
            } else {
                r = r * spec.dim(i) + digits[s];
            }
        }
        kept_part[static_cast<std::size_t>(idx)] = k;
        rest_part[static_cast<std::size_t>(idx)] = r;
    }

    Matrix out = Matrix::Zero(dk, dk);
    for (long r = 0; r < d; ++r) {
        for (long c = 0; c < d; ++c) {
            if (rest_part[static_cast<std::size_t>(r)] == rest_part[static_cast<std::size_t>(c)]) {
                out(kept_part[static_cast<std::size_t>(r)], kept_part[static_cast<std::size_t>(c)]) += rho(r, c);
            }
        }
    }
    return out;
}

Matrix ket_reduced_density(const Vector& amplitudes, const HilbertSpec& spec,
                           const std::vector<int>& keep) {
    const long d = spec.total_dim();
    if (amplitudes.size() != d) {
        throw DimensionMismatch("ket_reduced_density: amplitude count does not match spec");
    }
    auto kept = sorted_unique_cells(keep, spec.cells(), "ket_reduced_density");

    long dk = 1;
    for (int c : kept) {
        dk *= spec.dim(c);
    }
    const long dr = d / dk;

    std::vector<char> is_kept(static_cast<std::size_t>(spec.cells()), 0);
    for (int c : kept) {
        is_kept[static_cast<std::size_t>(c)] = 1;
    }

    // Reshape psi into a dk x dr matrix T, then rho_keep = T T^dag.
    Matrix t = Matrix::Zero(dk, dr);
    std::vector<int> digits(static_cast<std::size_t>(spec.cells()));
    for (long idx = 0; idx < d; ++idx) {
        decompose_index(idx, spec, digits);
        long k = 0;
        long r = 0;
        for (int i = 0; i < spec.cells(); ++i) {
            const auto s = static_cast<std::size_t>(i);
            if (is_kept[s]) {
                k = k * spec.dim(i) + digits[s];
            } else {
                r = r * spec.dim(i) + digits[s];
            }
        }
        t(k, r) = amplitudes(idx);
    }
    return t * t.adjoint();
}

Matrix embed_local(const Matrix& op, const HilbertSpec& spec, int cell) {
    if (cell < 0 || cell >= spec.cells()) {
        throw InvalidPartition("embed_local: cell index out of range");
    }
    require_square(op, "embed_local");
    if (op.rows() != spec.dim(cell)) {
        std::ostringstream os;
        os << "embed_local: operator dimension " << op.rows() << " does not match cell dimension "
           << spec.dim(cell);
        throw DimensionMismatch(os.str());
    }

    long left = 1;
    for (int i = 0; i < cell; ++i) {
        left *= spec.dim(i);
    }
    const int n = spec.dim(cell);
    const long right = spec.total_dim() / (left * n);

    Matrix out = Matrix::Zero(spec.total_dim(), spec.total_dim());
    for (long a = 0; a < left; ++a) {
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                const Complex v = op(x, y);
                if (v == Complex(0.0, 0.0)) {
                    continue;
                }
                const long row0 = (a * n + x) * right;
                const long col0 = (a * n + y) * right;
                for (long b = 0; b < right; ++b) {
                    out(row0 + b, col0 + b) = v;
                }
            }
        }
    }
    return out;
}

Ket::Ket(Vector amplitudes, HilbertSpec spec) : amps_(std::move(amplitudes)), spec_(std::move(spec)) {
    if (amps_.size() != spec_.total_dim()) {
        throw DimensionMismatch("Ket: amplitude count does not match spec dimension");
    }
    if (std::abs(amps_.norm() - 1.0) > kKetNormTol) {
        throw InvalidParameter("Ket: amplitudes are not normalized within 1e-12");
    }
}

DensityMatrix::DensityMatrix(Matrix entries, HilbertSpec spec)
    : mat_(std::move(entries)), spec_(std::move(spec)) {
    require_dim(mat_, spec_.total_dim(), "DensityMatrix");
    if (!is_hermitian(mat_)) {
        throw InvalidOperator("DensityMatrix: entries are not Hermitian within tolerance");
    }
    if (std::abs(mat_.trace().real() - 1.0) > kTraceTol || std::abs(mat_.trace().imag()) > kTraceTol) {
        throw InvalidParameter("DensityMatrix: trace is not 1 within 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (mat_ + mat_.adjoint()),
                                                 Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < kPsdClampFloor) {
        throw NotPositiveSemidefinite("DensityMatrix: smallest eigenvalue below -1e-10");
    }
}

DensityMatrix DensityMatrix::from_ket(const Ket& psi) {
    return {psi.projector(), psi.spec()};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    auto kept = sorted_unique_cells(keep, rho.spec().cells(), "partial_trace");
    std::vector<int> dims;
    dims.reserve(kept.size());
    for (int c : kept) {
        dims.push_back(rho.spec().dim(c));
    }
    Matrix reduced = partial_trace(rho.matrix(), rho.spec(), kept);
    // Round-off from the summation can leave the trace a hair off 1.
    reduced /= reduced.trace().real();
    return {std::move(reduced), HilbertSpec(std::move(dims))};
}

Matrix partial_transpose(const DensityMatrix& rho, const std::vector<int>& subset) {
    return partial_transpose(rho.matrix(), rho.spec(), subset);
}

} // namespace qbat
