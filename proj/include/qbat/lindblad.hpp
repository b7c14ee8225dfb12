// lindblad.hpp — Thermalization of two non-interacting qudit cells, each
// coupled to its own photonic bath, with Gamma_C and negativity recorded
// along the trajectory.

#pragma once

#include "qbat/linalg.hpp"

#include <string>
#include <vector>

namespace qbat::lindblad {

struct Config {
    int d = 5;                 // qudit dimension per cell
    double omega0 = 1.0;       // level spacing
    double g = 1.0;            // system-bath coupling rate
    double kt = 0.1;           // bath temperature (energy units)
    double t_final = 30.0;
    double dt = 1e-3;
    int record_every = 100;    // steps between samples

    void validate() const;
};

struct Trace {
    std::vector<double> times;
    std::vector<double> gamma_c;
    std::vector<double> negativity;
    std::vector<double> trace_error;
};

// Bose occupation e^{-w/kT}/(1 - e^{-w/kT}), stable for w/kT >> 1.
double photon_occupation(double omega, double kt);

// Truncated harmonic ladder on D levels: a = sum_{k=1}^{D-1} sqrt(k)|k-1><k|.
Matrix ladder_operator(int d);

// Right-hand side of the master equation for a two-cell state.
Matrix generator(const Matrix& rho, const Config& cfg);

// Fixed-step RK4 with per-step re-Hermitization and trace renormalization.
Trace integrate(const Config& cfg, const DensityMatrix& rho0);

// Convenience run starting from the two-qudit GHZ state.
Trace integrate(const Config& cfg);

// CSV columns: t, gamma_c, negativity, trace_error.
void write_csv(const Trace& trace, const std::string& path);

} // namespace qbat::lindblad
