#include "qbat/syk.hpp"

#include "qbat/advantage.hpp"
#include "qbat/io.hpp"
#include "qbat/rng.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <optional>

namespace qbat::syk {

namespace {

// Bit of mode j in basis index b; cell 0 is the most significant bit.
inline int mode_bit(long b, int j, int n) {
    return static_cast<int>((b >> (n - 1 - j)) & 1L);
}

inline long mode_mask(int j, int n) {
    return 1L << (n - 1 - j);
}

// Jordan-Wigner string sign of c_j / c+_j on |b>: parity of the qubits in
// |1> among the cells before j.
inline int string_sign(long b, int j, int n) {
    const long before = (j == 0) ? 0L : (b >> (n - j));
    return (std::popcount(static_cast<unsigned long>(before)) & 1) ? -1 : 1;
}

struct SignedState {
    long state;
    int sign;
};

// c_j: occupied (|0>) -> empty (|1>).
std::optional<SignedState> apply_annihilate(long b, int j, int n) {
    if (mode_bit(b, j, n) != 0) {
        return std::nullopt;
    }
    return SignedState{b | mode_mask(j, n), string_sign(b, j, n)};
}

// c+_j: empty (|1>) -> occupied (|0>).
std::optional<SignedState> apply_create(long b, int j, int n) {
    if (mode_bit(b, j, n) != 1) {
        return std::nullopt;
    }
    return SignedState{b & ~mode_mask(j, n), string_sign(b, j, n)};
}

std::vector<double> default_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 200; ++k) {
        grid.push_back(0.05 * k);
    }
    return grid;
}

} // namespace

void Config::validate() const {
    if (n < 2 || n > 12) {
        throw InvalidParameter("syk: N must be in [2, 12]");
    }
    if (jbar <= 0.0 || h <= 0.0) {
        throw InvalidParameter("syk: jbar and h must be positive");
    }
    if (!tau_grid.empty()) {
        if (tau_grid.front() != 0.0) {
            throw InvalidParameter("syk: tau grid must start at 0");
        }
        for (std::size_t k = 1; k < tau_grid.size(); ++k) {
            if (tau_grid[k] <= tau_grid[k - 1]) {
                throw InvalidParameter("syk: tau grid must be strictly ascending");
            }
        }
    }
}

std::vector<double> Config::grid() const {
    return tau_grid.empty() ? default_grid() : tau_grid;
}

int CouplingTensor::pair_index(int n, int i, int j) {
    if (i < 0 || j <= i || j >= n) {
        throw InvalidParameter("CouplingTensor: pair requires 0 <= i < j < n");
    }
    // Lexicographic rank of (i, j) among ordered pairs.
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

CouplingTensor::CouplingTensor(int n, Matrix values) : n_(n), values_(std::move(values)) {
    const int p = n * (n - 1) / 2;
    if (values_.rows() != p || values_.cols() != p) {
        throw DimensionMismatch("CouplingTensor: values must be P x P over ordered pairs");
    }
    if ((values_ - values_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidOperator("CouplingTensor: values must be Hermitian under pair exchange");
    }
}

Complex CouplingTensor::at(int i, int j, int k, int l) const {
    return values_(pair_index(n_, i, j), pair_index(n_, k, l));
}

CouplingTensor sample_couplings(const Config& cfg) {
    cfg.validate();
    const int p = cfg.n * (cfg.n - 1) / 2;
    const double sigma = cfg.jbar / std::pow(static_cast<double>(cfg.n), 1.5);
    Rng rng(cfg.seed);
    Matrix values(p, p);
    for (int a = 0; a < p; ++a) {
        values(a, a) = sigma * rng.gaussian();
        for (int b = a + 1; b < p; ++b) {
            const double re = (sigma / std::sqrt(2.0)) * rng.gaussian();
            const double im = (sigma / std::sqrt(2.0)) * rng.gaussian();
            values(a, b) = Complex(re, im);
            values(b, a) = Complex(re, -im);
        }
    }
    return {cfg.n, std::move(values)};
}

SectorBasis::SectorBasis(int n) : n_(n) {
    const long dim = 1L << n;
    states_.resize(static_cast<std::size_t>(n + 1));
    sector_.resize(static_cast<std::size_t>(dim));
    position_.resize(static_cast<std::size_t>(dim));
    for (long b = 0; b < dim; ++b) {
        const int m = n - std::popcount(static_cast<unsigned long>(b));
        sector_[static_cast<std::size_t>(b)] = m;
        position_[static_cast<std::size_t>(b)] =
            static_cast<int>(states_[static_cast<std::size_t>(m)].size());
        states_[static_cast<std::size_t>(m)].push_back(b);
    }
}

Charger::Charger(SectorBasis basis, std::vector<Matrix> blocks)
    : basis_(std::move(basis)), blocks_(std::move(blocks)) {}

Vector Charger::apply(const Vector& psi) const {
    const long dim = 1L << basis_.n();
    if (psi.size() != dim) {
        throw DimensionMismatch("Charger::apply: state dimension mismatch");
    }
    Vector out = Vector::Zero(dim);
    for (int m = 0; m <= basis_.n(); ++m) {
        const auto& states = basis_.states(m);
        if (states.empty()) {
            continue;
        }
        Vector sector(static_cast<long>(states.size()));
        for (std::size_t k = 0; k < states.size(); ++k) {
            sector(static_cast<long>(k)) = psi(states[k]);
        }
        sector = blocks_[static_cast<std::size_t>(m)] * sector;
        for (std::size_t k = 0; k < states.size(); ++k) {
            out(states[k]) = sector(static_cast<long>(k));
        }
    }
    return out;
}

Matrix Charger::dense() const {
    const long dim = 1L << basis_.n();
    Matrix out = Matrix::Zero(dim, dim);
    for (int m = 0; m <= basis_.n(); ++m) {
        const auto& states = basis_.states(m);
        const Matrix& block = blocks_[static_cast<std::size_t>(m)];
        for (std::size_t r = 0; r < states.size(); ++r) {
            for (std::size_t c = 0; c < states.size(); ++c) {
                out(states[r], states[c]) = block(static_cast<long>(r), static_cast<long>(c));
            }
        }
    }
    return out;
}

Charger build_charger(const Config& cfg, const CouplingTensor& j) {
    cfg.validate();
    if (j.n() != cfg.n) {
        throw DimensionMismatch("build_charger: coupling tensor size does not match N");
    }
    const int n = cfg.n;
    SectorBasis basis(n);

    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(n + 1));
    for (int m = 0; m <= n; ++m) {
        const auto& states = basis.states(m);
        Matrix block = Matrix::Zero(static_cast<long>(states.size()),
                                    static_cast<long>(states.size()));
        for (std::size_t col = 0; col < states.size(); ++col) {
            const long b0 = states[col];
            // Term J_{(ij),(kl)} c+_i c+_j c_k c_l, applied right to left.
            for (int l = 1; l < n; ++l) {
                const auto s1 = apply_annihilate(b0, l, n);
                if (!s1) {
                    continue;
                }
                for (int k = 0; k < l; ++k) {
                    const auto s2 = apply_annihilate(s1->state, k, n);
                    if (!s2) {
                        continue;
                    }
                    const int ann_sign = s1->sign * s2->sign;
                    for (int jj = 1; jj < n; ++jj) {
                        const auto s3 = apply_create(s2->state, jj, n);
                        if (!s3) {
                            continue;
                        }
                        for (int ii = 0; ii < jj; ++ii) {
                            const auto s4 = apply_create(s3->state, ii, n);
                            if (!s4) {
                                continue;
                            }
                            const int sign = ann_sign * s3->sign * s4->sign;
                            block(basis.position_of(s4->state), static_cast<long>(col)) +=
                                static_cast<double>(sign) * j.at(ii, jj, k, l);
                        }
                    }
                }
            }
        }
        blocks.push_back(std::move(block));
    }
    return {std::move(basis), std::move(blocks)};
}

Ket ground_state(const Config& cfg) {
    cfg.validate();
    const long dim = 1L << cfg.n;
    const double amp = std::pow(0.5, 0.5 * cfg.n);
    Vector v(dim);
    for (long b = 0; b < dim; ++b) {
        // (|0> - i|1>)/sqrt(2) per cell: phase (-i)^popcount.
        const int ones = std::popcount(static_cast<unsigned long>(b));
        Complex phase(1.0, 0.0);
        switch (ones % 4) {
            case 0: phase = {1.0, 0.0}; break;
            case 1: phase = {0.0, -1.0}; break;
            case 2: phase = {-1.0, 0.0}; break;
            case 3: phase = {0.0, 1.0}; break;
        }
        v(b) = amp * phase;
    }
    return {std::move(v), HilbertSpec(std::vector<int>(static_cast<std::size_t>(cfg.n), 2))};
}

Evolution::Evolution(const Charger& charger, const Vector& psi0) {
    basis_ = &charger.basis();
    dim_ = 1L << charger.n();
    if (psi0.size() != dim_) {
        throw DimensionMismatch("Evolution: state dimension mismatch");
    }
    for (int m = 0; m <= charger.n(); ++m) {
        const auto& states = basis_->states(m);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(charger.block(m));
        if (solver.info() != Eigen::Success) {
            throw InvalidOperator("Evolution: sector eigendecomposition failed");
        }
        Vector sector(static_cast<long>(states.size()));
        for (std::size_t k = 0; k < states.size(); ++k) {
            sector(static_cast<long>(k)) = psi0(states[k]);
        }
        vectors_.push_back(solver.eigenvectors());
        values_.push_back(solver.eigenvalues());
        coeffs_.push_back(vectors_.back().adjoint() * sector);
    }
}

Vector Evolution::state_at(double t) const {
    Vector out(dim_);
    for (int m = 0; m < static_cast<int>(vectors_.size()); ++m) {
        const auto& states = basis_->states(m);
        const auto& values = values_[static_cast<std::size_t>(m)];
        Vector rotated = coeffs_[static_cast<std::size_t>(m)];
        for (long k = 0; k < rotated.size(); ++k) {
            rotated(k) *= std::exp(Complex(0.0, -values(k) * t));
        }
        rotated = vectors_[static_cast<std::size_t>(m)] * rotated;
        for (std::size_t k = 0; k < states.size(); ++k) {
            out(states[k]) = rotated(static_cast<long>(k));
        }
    }
    return out;
}

namespace {

// H psi for H = sum_j h sigma^y_j without forming the dense matrix.
Vector apply_field(const Vector& psi, int n, double h) {
    const long dim = 1L << n;
    Vector out = Vector::Zero(dim);
    for (long b = 0; b < dim; ++b) {
        const Complex amp = psi(b);
        if (amp == Complex(0.0, 0.0)) {
            continue;
        }
        for (int jmode = 0; jmode < n; ++jmode) {
            const long flipped = b ^ mode_mask(jmode, n);
            // sigma^y |0> = i|1>, sigma^y |1> = -i|0>.
            const Complex factor =
                mode_bit(b, jmode, n) == 0 ? Complex(0.0, h) : Complex(0.0, -h);
            out(flipped) += factor * amp;
        }
    }
    return out;
}

} // namespace

Trace evolve(const Config& cfg, const CouplingTensor& j) {
    cfg.validate();
    const int n = cfg.n;
    const Charger charger = build_charger(cfg, j);
    const Ket psi0 = ground_state(cfg);
    const Evolution evolution(charger, psi0.amplitudes());
    const HilbertSpec spec = psi0.spec();
    const ObservableSet observables(spec);

    // <V> and <V^2> are conserved under e^{-iVt}; evaluate once at tau = 0.
    const Vector v_psi0 = charger.apply(psi0.amplitudes());
    const double v_mean = psi0.amplitudes().dot(v_psi0).real();
    const double v_second = v_psi0.squaredNorm();
    const double v_variance = v_second - v_mean * v_mean;
    const double gap_norm = 2.0 * n * cfg.h * cfg.h; // sum_i tr((h sigma^y)^2)
    const double p_scale = std::sqrt(4.0 * v_second * n * cfg.h * cfg.h);

    Trace trace;
    for (double tau : cfg.grid()) {
        const double t = tau / cfg.jbar;
        const Vector psi = evolution.state_at(t);
        const Vector v_psi = charger.apply(psi);
        const Vector h_psi = apply_field(psi, n, cfg.h);

        // tr(iH[rho,V]) for a pure state is 2 Im<H psi|V psi>.
        const double power = 2.0 * h_psi.dot(v_psi).imag();
        const double energy = h_psi.dot(psi).real();
        const double gc = commutation_matrix_pure(Ket(psi, spec), observables).norm();

        trace.tau.push_back(tau);
        trace.p_tilde.push_back(power / p_scale);
        trace.sqrt_gamma_c.push_back(std::sqrt(gc));
        trace.bound_ratio.push_back(std::abs(power) /
                                    theorem_bound(1.0, gc, gap_norm, v_variance));
        trace.energy.push_back(energy);
    }
    return trace;
}

void write_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidParameter("syk write_csv: cannot open " + path);
    }
    out << "tau,p_tilde,sqrt_gamma_c,bound_ratio,energy\n";
    for (std::size_t k = 0; k < trace.tau.size(); ++k) {
        out << io::g17(trace.tau[k]) << ',' << io::g17(trace.p_tilde[k]) << ','
            << io::g17(trace.sqrt_gamma_c[k]) << ',' << io::g17(trace.bound_ratio[k]) << ','
            << io::g17(trace.energy[k]) << '\n';
    }
}

} // namespace qbat::syk
