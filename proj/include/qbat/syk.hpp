// syk.hpp — SYK-charged spin battery: disorder sampling, number-sector exact
// time evolution, and the dimensionless power trace.

#pragma once

#include "qbat/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qbat::syk {

inline constexpr std::uint64_t kDefaultSeed = 17;

struct Config {
    int n = 8;                    // qubit cells / fermion modes, <= 12
    double jbar = 1.0;            // coupling scale
    double h = 1.0;               // magnetic field
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> tau_grid; // empty -> default 0:0.05:10

    void validate() const;
    std::vector<double> grid() const;
};

// Couplings J_{(ij),(kl)} over ordered mode pairs i<j, k<l, Hermitian under
// pair exchange. Row = creation pair, column = annihilation pair.
class CouplingTensor {
public:
    CouplingTensor(int n, Matrix values);

    int n() const { return n_; }
    int pairs() const { return static_cast<int>(values_.rows()); }
    const Matrix& values() const { return values_; }
    Complex at(int i, int j, int k, int l) const;

    static int pair_index(int n, int i, int j);

private:
    int n_;
    Matrix values_;
};

CouplingTensor sample_couplings(const Config& cfg);

// Computational-basis states grouped by fermion number. A mode is occupied
// when its qubit is |0> (the Jordan-Wigner convention used throughout), so
// the fermion count of basis index B is N - popcount(B).
class SectorBasis {
public:
    explicit SectorBasis(int n);

    int n() const { return n_; }
    int sectors() const { return n_ + 1; }
    const std::vector<long>& states(int m) const { return states_.at(static_cast<std::size_t>(m)); }
    int sector_of(long basis_index) const { return sector_.at(static_cast<std::size_t>(basis_index)); }
    int position_of(long basis_index) const { return position_.at(static_cast<std::size_t>(basis_index)); }

private:
    int n_;
    std::vector<std::vector<long>> states_;
    std::vector<int> sector_;
    std::vector<int> position_;
};

// The charging operator V = sum J_{(ij),(kl)} c+_i c+_j c_k c_l, stored as
// one dense block per fermion-number sector.
class Charger {
public:
    Charger(SectorBasis basis, std::vector<Matrix> blocks);

    const SectorBasis& basis() const { return basis_; }
    const Matrix& block(int m) const { return blocks_.at(static_cast<std::size_t>(m)); }
    int n() const { return basis_.n(); }

    Vector apply(const Vector& psi) const;
    Matrix dense() const; // for small-N cross checks

private:
    SectorBasis basis_;
    std::vector<Matrix> blocks_;
};

Charger build_charger(const Config& cfg, const CouplingTensor& j);

// Ground state of H = sum_i h sigma^y_i: the product of -1 eigenvectors.
Ket ground_state(const Config& cfg);

// Exact e^{-iVt} via per-sector eigendecompositions.
class Evolution {
public:
    Evolution(const Charger& charger, const Vector& psi0);

    Vector state_at(double t) const;

private:
    const SectorBasis* basis_;
    std::vector<Matrix> vectors_;     // eigenvectors per sector
    std::vector<RealVector> values_;  // eigenvalues per sector
    std::vector<Vector> coeffs_;      // eigenbasis coordinates of psi0
    long dim_;
};

struct Trace {
    std::vector<double> tau;
    std::vector<double> p_tilde;
    std::vector<double> sqrt_gamma_c;
    std::vector<double> bound_ratio;
    std::vector<double> energy;
};

Trace evolve(const Config& cfg, const CouplingTensor& j);

// CSV columns: tau, p_tilde, sqrt_gamma_c, bound_ratio, energy.
void write_csv(const Trace& trace, const std::string& path);

} // namespace qbat::syk
