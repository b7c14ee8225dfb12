#include "qbat/states.hpp"

#include "qbat/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qbat {

namespace {

Vector gaussian_vector(long dim, Rng& rng) {
    Vector v(dim);
    for (long k = 0; k < dim; ++k) {
        v(k) = rng.complex_gaussian();
    }
    return v;
}

Ket normalized_ket(Vector v, HilbertSpec spec) {
    const double norm = v.norm();
    if (norm <= 0.0) {
        throw InvalidParameter("random state: zero vector drawn");
    }
    return {v / norm, std::move(spec)};
}

// Haar-random unitary from the QR decomposition of a Ginibre matrix, with
// the phase convention fixed by making the R diagonal positive.
Matrix haar_unitary(int n, Rng& rng) {
    Matrix g(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            g(r, c) = rng.complex_gaussian();
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        const double a = std::abs(d);
        q.col(k) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

} // namespace

Ket w_state(int n) {
    if (n < 2 || n > 14) {
        throw InvalidParameter("w_state: N must be in [2, 14]");
    }
    HilbertSpec spec(std::vector<int>(static_cast<std::size_t>(n), 2));
    Vector v = Vector::Zero(spec.total_dim());
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
        // Excitation on cell i; cell 0 is the most significant bit.
        v(1L << (n - 1 - i)) = amp;
    }
    return {std::move(v), std::move(spec)};
}

Ket ghz_two_qudit(int d) {
    if (d < 2 || d > 32) {
        throw InvalidParameter("ghz_two_qudit: D must be in [2, 32]");
    }
    HilbertSpec spec{d, d};
    Vector v = Vector::Zero(spec.total_dim());
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        v(static_cast<long>(k) * d + k) = amp;
    }
    return {std::move(v), std::move(spec)};
}

Ket qutrit_initial() {
    return ghz_two_qudit(3);
}

Ket qutrit_final() {
    HilbertSpec spec{3, 3};
    Vector v = Vector::Zero(9);
    v(0) = v(8) = 1.0 / std::sqrt(2.0);
    return {std::move(v), std::move(spec)};
}

Ket k_local_compose(const std::vector<Ket>& blocks) {
    if (blocks.empty()) {
        throw InvalidParameter("k_local_compose: at least one block required");
    }
    std::vector<int> dims;
    Vector v(1);
    v(0) = 1.0;
    for (const Ket& block : blocks) {
        for (int n : block.spec().dims()) {
            dims.push_back(n);
        }
        const Vector& b = block.amplitudes();
        Vector next(v.size() * b.size());
        for (long i = 0; i < v.size(); ++i) {
            next.segment(i * b.size(), b.size()) = v(i) * b;
        }
        v = std::move(next);
        if (v.size() > HilbertSpec::kDefaultMaxDim) {
            throw InvalidParameter("k_local_compose: composite dimension exceeds maximum");
        }
    }
    return {std::move(v), HilbertSpec(std::move(dims))};
}

Ket random_pure(const HilbertSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    return normalized_ket(gaussian_vector(spec.total_dim(), rng), spec);
}

DensityMatrix random_density(const HilbertSpec& spec, int rank, std::uint64_t seed) {
    if (rank < 1 || rank > spec.total_dim()) {
        throw InvalidParameter("random_density: rank must be in [1, total_dim]");
    }
    Rng rng(seed);
    const auto weights = rng.simplex_weights(rank);
    Matrix rho = Matrix::Zero(spec.total_dim(), spec.total_dim());
    for (int k = 0; k < rank; ++k) {
        Vector v = gaussian_vector(spec.total_dim(), rng);
        v /= v.norm();
        rho += weights[static_cast<std::size_t>(k)] * (v * v.adjoint());
    }
    return {std::move(rho), spec};
}

DensityMatrix random_separable(const HilbertSpec& spec, int terms, std::uint64_t seed) {
    if (terms < 1) {
        throw InvalidParameter("random_separable: terms must be >= 1");
    }
    Rng rng(seed);
    const auto weights = rng.simplex_weights(terms);
    Matrix rho = Matrix::Zero(spec.total_dim(), spec.total_dim());
    for (int t = 0; t < terms; ++t) {
        Vector prod(1);
        prod(0) = 1.0;
        for (int i = 0; i < spec.cells(); ++i) {
            Vector cell = gaussian_vector(spec.dim(i), rng);
            cell /= cell.norm();
            Vector next(prod.size() * cell.size());
            for (long a = 0; a < prod.size(); ++a) {
                next.segment(a * cell.size(), cell.size()) = prod(a) * cell;
            }
            prod = std::move(next);
        }
        rho += weights[static_cast<std::size_t>(t)] * (prod * prod.adjoint());
    }
    return {std::move(rho), spec};
}

Matrix random_local_unitary_product(const HilbertSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    Matrix u(1, 1);
    u(0, 0) = 1.0;
    for (int i = 0; i < spec.cells(); ++i) {
        const Matrix ui = haar_unitary(spec.dim(i), rng);
        Matrix next(u.rows() * ui.rows(), u.cols() * ui.cols());
        for (long r = 0; r < u.rows(); ++r) {
            for (long c = 0; c < u.cols(); ++c) {
                next.block(r * ui.rows(), c * ui.cols(), ui.rows(), ui.cols()) = u(r, c) * ui;
            }
        }
        u = std::move(next);
    }
    return u;
}

namespace {

// Pauli string as a sparse action on 5-qubit basis indices: X flips, Z signs.
struct PauliString {
    const char* ops; // five of {'I','X','Y','Z'}
};

Matrix pauli_string_matrix(const PauliString& s) {
    constexpr int kQubits = 5;
    const long dim = 1L << kQubits;
    Matrix out = Matrix::Zero(dim, dim);
    for (long col = 0; col < dim; ++col) {
        long row = col;
        Complex amp(1.0, 0.0);
        for (int q = 0; q < kQubits; ++q) {
            const int bit = static_cast<int>((col >> (kQubits - 1 - q)) & 1);
            switch (s.ops[q]) {
                case 'I':
                    break;
                case 'X':
                    row ^= 1L << (kQubits - 1 - q);
                    break;
                case 'Y':
                    row ^= 1L << (kQubits - 1 - q);
                    amp *= bit ? Complex(0.0, -1.0) : Complex(0.0, 1.0);
                    break;
                case 'Z':
                    amp *= bit ? -1.0 : 1.0;
                    break;
                default:
                    throw InvalidParameter("pauli_string_matrix: bad operator label");
            }
        }
        out(row, col) = amp;
    }
    return out;
}

Vector build_ame5_amplitudes() {
    // Cyclic stabilizer generators of the five-qubit code. Any state in
    // their joint +1 eigenspace has all weight-<=2 Pauli expectations equal
    // to zero, hence maximally mixed 1- and 2-cell marginals.
    const PauliString gens[4] = {{"XZZXI"}, {"IXZZX"}, {"XIXZZ"}, {"ZXIXZ"}};
    const long dim = 32;
    Rng rng(0x5135u); // fixed seed so the fixture is reproducible
    Vector v(dim);
    for (long k = 0; k < dim; ++k) {
        v(k) = rng.complex_gaussian();
    }
    for (const auto& g : gens) {
        const Matrix m = pauli_string_matrix(g);
        v = 0.5 * (v + m * v);
    }
    const double norm = v.norm();
    if (norm < 1e-3) {
        throw InvalidParameter("ame5_fixture: seed vector nearly orthogonal to code space");
    }
    return v / norm;
}

} // namespace

Ket ame5_fixture() {
    static const Vector amps = build_ame5_amplitudes();
    return {amps, HilbertSpec{2, 2, 2, 2, 2}};
}

void write_ame5_fixture(const std::string& path) {
    const Ket psi = ame5_fixture();
    std::ofstream out(path);
    if (!out) {
        throw InvalidParameter("write_ame5_fixture: cannot open " + path);
    }
    char line[80];
    for (long k = 0; k < psi.amplitudes().size(); ++k) {
        std::snprintf(line, sizeof(line), "%.17g %.17g", psi.amplitudes()(k).real(),
                      psi.amplitudes()(k).imag());
        out << line << '\n';
    }
}

Ket read_ame5_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidParameter("read_ame5_fixture: cannot open " + path);
    }
    Vector v(32);
    for (long k = 0; k < 32; ++k) {
        double re = 0.0;
        double im = 0.0;
        if (!(in >> re >> im)) {
            throw InvalidParameter("read_ame5_fixture: expected 32 're im' lines");
        }
        v(k) = Complex(re, im);
    }
    return {std::move(v), HilbertSpec{2, 2, 2, 2, 2}};
}

} // namespace qbat
