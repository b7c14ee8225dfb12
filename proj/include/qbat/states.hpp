// states.hpp — Constructors for the named battery states plus seeded random
// generators used by the property suites.

#pragma once

#include "qbat/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qbat {

// Uniform single-excitation superposition of N qubits.
Ket w_state(int n);

// (1/sqrt(D)) sum_d |dd> on two D-level cells.
Ket ghz_two_qudit(int d);

// (|00>+|11>+|22>)/sqrt(3) and (|00>+|22>)/sqrt(2) on two qutrits.
Ket qutrit_initial();
Ket qutrit_final();

// Tensor product in block order; the result spec concatenates the block specs.
Ket k_local_compose(const std::vector<Ket>& blocks);

// Normalized standard-complex-Gaussian vector.
Ket random_pure(const HilbertSpec& spec, std::uint64_t seed);

// Mixture of `rank` random pure projectors with flat-Dirichlet weights.
DensityMatrix random_density(const HilbertSpec& spec, int rank, std::uint64_t seed);

// Convex mixture of `terms` random product states.
DensityMatrix random_separable(const HilbertSpec& spec, int terms, std::uint64_t seed);

// Tensor product of independent Haar-random unitaries, one per cell.
Matrix random_local_unitary_product(const HilbertSpec& spec, std::uint64_t seed);

// Five-qubit pure state whose every 1- and 2-cell marginal is maximally
// mixed, built by projecting a seeded random vector onto the joint +1
// eigenspace of the five-qubit-code stabilizer generators.
Ket ame5_fixture();

// Fixture file: 32 lines of "re im" pairs in computational-basis order.
void write_ame5_fixture(const std::string& path);
Ket read_ame5_fixture(const std::string& path);

} // namespace qbat
