// entanglement.hpp — Negativity, entanglement entropy, and the 2-uniformity
// deficit used to contrast entanglement measures against Gamma_C.

#pragma once

#include "qbat/linalg.hpp"

#include <vector>

namespace qbat {

struct Bipartition {
    std::vector<int> subset_a;
};

// (||rho^T_A||_Tr - 1) / 2.
double negativity(const DensityMatrix& rho, const Bipartition& cut);

// Von Neumann entropy of the reduced state, in nats.
double entanglement_entropy(const Ket& psi, const std::vector<int>& subset);

// Max over all proper 1- and 2-cell subsets A of ||rho_A - I/d_A||.
double two_uniformity_deficit(const Ket& psi);

} // namespace qbat
