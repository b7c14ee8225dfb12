// propsuite.hpp — Seeded property suites over random states: positivity and
// norm bounds of the commutation matrix, separable-state ceiling, local
// unitary invariance, the pure fast-path equivalence, and the power
// identity. Shared by the verify CLI command and the test suites.

#pragma once

#include "qbat/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qbat::props {

struct SuiteResult {
    std::string name;
    bool pass = false;
    int trials = 0;
    double worst = 0.0;          // worst observed margin (suite-specific meaning)
    std::uint64_t failing_seed = 0;
    std::string detail;
};

struct Options {
    int trials = 200;
    std::uint64_t seed0 = 1;
    // Self-check hook: negate the commutation-matrix entries (a deliberate
    // sign error in its defining formula) to confirm the suites can detect
    // a broken implementation. Never set outside tests.
    bool mutate_sign = false;
};

SuiteResult psd_commutation(const Options& opt);           // min eigenvalue >= -1e-10
SuiteResult gamma_bounded_by_cells(const Options& opt);    // Gamma_C <= N + 1e-8
SuiteResult separable_no_advantage(const Options& opt);    // Gamma_C <= 1 + 1e-8
SuiteResult local_unitary_invariance(const Options& opt);  // spectrum drift <= 1e-8
SuiteResult pure_fast_path_equivalence(const Options& opt);// fast vs dense <= 1e-10
SuiteResult power_identity(const Options& opt);            // residual <= 1e-8
SuiteResult heisenberg_robertson(const Options& opt);      // |P| <= 2 sqrt(varV varH)

std::vector<SuiteResult> run_all(const Options& opt);

} // namespace qbat::props
