// observables.hpp — Orthonormal local observable sets and non-interacting
// battery Hamiltonians with their direction vector u.

#pragma once

#include "qbat/linalg.hpp"

#include <vector>

namespace qbat {

// Generalized Gell-Mann basis of n x n Hermitian matrices, orthonormal under
// tr(A B) = delta. Deterministic order: for each pair r < s (lexicographic)
// the symmetric then the antisymmetric element, then the n-1 diagonal
// traceless elements, then I/sqrt(n) last.
std::vector<Matrix> orthonormal_basis(int n);

// Per-cell orthonormal bases with a flattened site-major index.
class ObservableSet {
public:
    explicit ObservableSet(HilbertSpec spec);

    const HilbertSpec& spec() const { return spec_; }
    int size() const { return static_cast<int>(cell_.size()); }

    int cell_of(int mu) const { return cell_.at(static_cast<std::size_t>(mu)); }
    int local_index(int mu) const { return alpha_.at(static_cast<std::size_t>(mu)); }
    int flat_index(int cell, int alpha) const;
    bool is_identity_element(int mu) const;

    const Matrix& local(int mu) const;
    const std::vector<Matrix>& cell_basis(int cell) const;

    Matrix embedded(int mu) const;
    std::vector<Matrix> embedded_all() const;

private:
    HilbertSpec spec_;
    std::vector<std::vector<Matrix>> bases_; // per cell
    std::vector<int> offsets_;               // flat index of each cell's first element
    std::vector<int> cell_;                  // mu -> cell
    std::vector<int> alpha_;                 // mu -> index within cell
};

ObservableSet observable_set(const HilbertSpec& spec);

// H = sum_i embed(H_i) together with gap_norm = sum_i tr(H_i^2) and the unit
// vector u over flattened observable indices with H = sqrt(gap_norm) M.u.
class BatteryHamiltonian {
public:
    BatteryHamiltonian(HilbertSpec spec, std::vector<Matrix> local_terms);

    const HilbertSpec& spec() const { return spec_; }
    const std::vector<Matrix>& locals() const { return locals_; }
    double gap_norm() const { return gap_norm_; }
    const RealVector& u() const { return u_; }

    // Dense global matrix; intended for small total dimensions.
    Matrix matrix() const;

private:
    HilbertSpec spec_;
    std::vector<Matrix> locals_;
    double gap_norm_ = 0.0;
    RealVector u_;
};

BatteryHamiltonian battery_hamiltonian(const HilbertSpec& spec,
                                       const std::vector<Matrix>& local_terms);

// Inverse construction: local terms H_i = sqrt(gap_norm) sum_a u[(i,a)] A_a.
// Used to align H with a chosen direction, e.g. the top eigenvector of the
// commutation matrix.
BatteryHamiltonian hamiltonian_from_direction(const ObservableSet& m, const RealVector& u,
                                              double gap_norm);

} // namespace qbat
