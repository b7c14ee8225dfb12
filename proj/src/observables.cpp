#include "qbat/observables.hpp"

#include <cmath>
#include <sstream>

namespace qbat {

std::vector<Matrix> orthonormal_basis(int n) {
    if (n < 2 || n > 32) {
        throw InvalidParameter("orthonormal_basis: n must be in [2, 32]");
    }
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(n) * n);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < n; ++r) {
        for (int s = r + 1; s < n; ++s) {
            Matrix sym = Matrix::Zero(n, n);
            sym(r, s) = inv_sqrt2;
            sym(s, r) = inv_sqrt2;
            basis.push_back(std::move(sym));

            Matrix asym = Matrix::Zero(n, n);
            asym(r, s) = Complex(0.0, -inv_sqrt2);
            asym(s, r) = Complex(0.0, inv_sqrt2);
            basis.push_back(std::move(asym));
        }
    }
    // Diagonal traceless elements: D_l = (sum_{j<l} |j><j| - l|l><l|)/sqrt(l(l+1)).
    for (int l = 1; l < n; ++l) {
        Matrix d = Matrix::Zero(n, n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) {
            d(j, j) = scale;
        }
        d(l, l) = -static_cast<double>(l) * scale;
        basis.push_back(std::move(d));
    }
    basis.push_back(Matrix::Identity(n, n) / std::sqrt(static_cast<double>(n)));
    return basis;
}

ObservableSet::ObservableSet(HilbertSpec spec) : spec_(std::move(spec)) {
    offsets_.reserve(static_cast<std::size_t>(spec_.cells()));
    int offset = 0;
    for (int i = 0; i < spec_.cells(); ++i) {
        offsets_.push_back(offset);
        bases_.push_back(orthonormal_basis(spec_.dim(i)));
        const int count = spec_.dim(i) * spec_.dim(i);
        for (int a = 0; a < count; ++a) {
            cell_.push_back(i);
            alpha_.push_back(a);
        }
        offset += count;
    }
}

int ObservableSet::flat_index(int cell, int alpha) const {
    if (cell < 0 || cell >= spec_.cells()) {
        throw InvalidPartition("ObservableSet::flat_index: cell out of range");
    }
    const int count = spec_.dim(cell) * spec_.dim(cell);
    if (alpha < 0 || alpha >= count) {
        throw InvalidParameter("ObservableSet::flat_index: local index out of range");
    }
    return offsets_[static_cast<std::size_t>(cell)] + alpha;
}

bool ObservableSet::is_identity_element(int mu) const {
    const int cell = cell_of(mu);
    return local_index(mu) == spec_.dim(cell) * spec_.dim(cell) - 1;
}

const Matrix& ObservableSet::local(int mu) const {
    return bases_[static_cast<std::size_t>(cell_of(mu))][static_cast<std::size_t>(local_index(mu))];
}

const std::vector<Matrix>& ObservableSet::cell_basis(int cell) const {
    return bases_.at(static_cast<std::size_t>(cell));
}

Matrix ObservableSet::embedded(int mu) const {
    return embed_local(local(mu), spec_, cell_of(mu));
}

std::vector<Matrix> ObservableSet::embedded_all() const {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int mu = 0; mu < size(); ++mu) {
        out.push_back(embedded(mu));
    }
    return out;
}

ObservableSet observable_set(const HilbertSpec& spec) {
    return ObservableSet(spec);
}

BatteryHamiltonian::BatteryHamiltonian(HilbertSpec spec, std::vector<Matrix> local_terms)
    : spec_(std::move(spec)), locals_(std::move(local_terms)) {
    if (static_cast<int>(locals_.size()) != spec_.cells()) {
        throw DimensionMismatch("BatteryHamiltonian: one local term per cell required");
    }
    for (int i = 0; i < spec_.cells(); ++i) {
        const Matrix& h = locals_[static_cast<std::size_t>(i)];
        if (h.rows() != spec_.dim(i) || h.cols() != spec_.dim(i)) {
            std::ostringstream os;
            os << "BatteryHamiltonian: local term " << i << " has dimension " << h.rows()
               << ", expected " << spec_.dim(i);
            throw DimensionMismatch(os.str());
        }
        if (!is_hermitian(h)) {
            throw InvalidOperator("BatteryHamiltonian: local term is not Hermitian");
        }
        gap_norm_ += (h * h).trace().real();
    }
    if (gap_norm_ < 1e-14) {
        throw ZeroHamiltonian("BatteryHamiltonian: sum of tr(H_i^2) is numerically zero");
    }

    const ObservableSet m(spec_);
    const double root = std::sqrt(gap_norm_);
    u_.resize(m.size());
    for (int mu = 0; mu < m.size(); ++mu) {
        const Matrix& a = m.local(mu);
        const Complex c = (locals_[static_cast<std::size_t>(m.cell_of(mu))] * a).trace();
        u_(mu) = c.real() / root;
    }
    if (std::abs(u_.norm() - 1.0) > 1e-12) {
        throw InvalidOperator("BatteryHamiltonian: direction vector failed to normalize");
    }
    // Per-cell reconstruction check of H_i = sqrt(gap_norm) sum_a u A_a.
    for (int i = 0; i < spec_.cells(); ++i) {
        Matrix rec = Matrix::Zero(spec_.dim(i), spec_.dim(i));
        const auto& basis = m.cell_basis(i);
        for (int a = 0; a < static_cast<int>(basis.size()); ++a) {
            rec += root * u_(m.flat_index(i, a)) * basis[static_cast<std::size_t>(a)];
        }
        const double err = (rec - locals_[static_cast<std::size_t>(i)]).cwiseAbs().maxCoeff();
        if (err > 1e-10 * std::max(1.0, root)) {
            throw InvalidOperator("BatteryHamiltonian: observable-basis reconstruction failed");
        }
    }
}

Matrix BatteryHamiltonian::matrix() const {
    Matrix h = Matrix::Zero(spec_.total_dim(), spec_.total_dim());
    for (int i = 0; i < spec_.cells(); ++i) {
        h += embed_local(locals_[static_cast<std::size_t>(i)], spec_, i);
    }
    return h;
}

BatteryHamiltonian battery_hamiltonian(const HilbertSpec& spec,
                                       const std::vector<Matrix>& local_terms) {
    return BatteryHamiltonian(spec, local_terms);
}

BatteryHamiltonian hamiltonian_from_direction(const ObservableSet& m, const RealVector& u,
                                              double gap_norm) {
    if (u.size() != m.size()) {
        throw DimensionMismatch("hamiltonian_from_direction: u length does not match observable count");
    }
    if (gap_norm <= 0.0) {
        throw ZeroHamiltonian("hamiltonian_from_direction: gap_norm must be positive");
    }
    if (std::abs(u.norm() - 1.0) > 1e-10) {
        throw InvalidParameter("hamiltonian_from_direction: u must be a unit vector");
    }
    const double root = std::sqrt(gap_norm);
    std::vector<Matrix> locals;
    locals.reserve(static_cast<std::size_t>(m.spec().cells()));
    for (int i = 0; i < m.spec().cells(); ++i) {
        Matrix h = Matrix::Zero(m.spec().dim(i), m.spec().dim(i));
        const auto& basis = m.cell_basis(i);
        for (int a = 0; a < static_cast<int>(basis.size()); ++a) {
            h += root * u(m.flat_index(i, a)) * basis[static_cast<std::size_t>(a)];
        }
        locals.push_back(std::move(h));
    }
    return {m.spec(), std::move(locals)};
}

} // namespace qbat
