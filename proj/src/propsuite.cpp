#include "qbat/propsuite.hpp"

#include "qbat/advantage.hpp"
#include "qbat/observables.hpp"
#include "qbat/rng.hpp"
#include "qbat/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbat::props {

namespace {

// Raw commutation-matrix entries, optionally with the deliberate sign error
// enabled for the suite self-check.
RealMatrix raw_commutation_entries(const DensityMatrix& rho, const ObservableSet& m,
                                   bool mutate_sign) {
    const Matrix s = psd_sqrt(rho.matrix());
    const long d = s.rows();
    Matrix stack(d * d, m.size());
    for (int mu = 0; mu < m.size(); ++mu) {
        const Matrix e = m.embedded(mu);
        const Matrix x = e * s - s * e;
        stack.col(mu) = Eigen::Map<const Vector>(x.data(), d * d);
    }
    const Matrix gram = stack.adjoint() * stack;
    RealMatrix g = 0.5 * (gram.real() + gram.real().transpose());
    return mutate_sign ? RealMatrix(-g) : g;
}

RealVector symmetric_spectrum(const RealMatrix& g) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g);
    return solver.eigenvalues();
}

// Alternate small specs so the suites cover unequal cell dimensions too.
HilbertSpec mixed_state_spec(int trial) {
    switch (trial % 3) {
        case 0: return HilbertSpec{3, 3};
        case 1: return HilbertSpec{2, 3};
        default: return HilbertSpec{2, 2, 2};
    }
}

HilbertSpec qubit_spec(int trial) {
    const int cells = 2 + trial % 3; // 2..4 qubits
    return HilbertSpec(std::vector<int>(static_cast<std::size_t>(cells), 2));
}

Matrix random_hermitian(long dim, Rng& rng) {
    Matrix a(dim, dim);
    for (long r = 0; r < dim; ++r) {
        for (long c = 0; c < dim; ++c) {
            a(r, c) = rng.complex_gaussian();
        }
    }
    return 0.5 * (a + a.adjoint());
}

BatteryHamiltonian random_battery(const HilbertSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Matrix> locals;
    for (int i = 0; i < spec.cells(); ++i) {
        locals.push_back(random_hermitian(spec.dim(i), rng));
    }
    return battery_hamiltonian(spec, locals);
}

DensityMatrix random_state(const HilbertSpec& spec, std::uint64_t seed, bool pure) {
    if (pure) {
        return DensityMatrix::from_ket(random_pure(spec, seed));
    }
    const int rank = 1 + static_cast<int>(seed % static_cast<std::uint64_t>(spec.total_dim()));
    return random_density(spec, rank, seed);
}

} // namespace

SuiteResult psd_commutation(const Options& opt) {
    SuiteResult result{"commutation matrix positive semidefinite", true, opt.trials, 0.0, 0, ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec = mixed_state_spec(t);
        const DensityMatrix rho = random_density(spec, 1 + t % static_cast<int>(spec.total_dim()), seed);
        const RealMatrix g = raw_commutation_entries(rho, ObservableSet(spec), opt.mutate_sign);
        const double min_eig = symmetric_spectrum(g)(0);
        result.worst = std::min(result.worst, min_eig);
        if (min_eig < -1e-10) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "min eigenvalue " << result.worst;
    result.detail = os.str();
    return result;
}

SuiteResult gamma_bounded_by_cells(const Options& opt) {
    SuiteResult result{"Gamma_C bounded by cell count", true, opt.trials, 0.0, 0, ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec = qubit_spec(t);
        const DensityMatrix rho = random_state(spec, seed, t % 2 == 0);
        const double gamma = gamma_c(rho);
        const double slack = gamma - static_cast<double>(spec.cells());
        result.worst = std::max(result.worst, slack);
        if (slack > 1e-8) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "max (Gamma_C - N) = " << result.worst;
    result.detail = os.str();
    return result;
}

SuiteResult separable_no_advantage(const Options& opt) {
    SuiteResult result{"separable states have no advantage", true, opt.trials, 0.0, 0, ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec = mixed_state_spec(t);
        const DensityMatrix rho = random_separable(spec, 1 + t % 6, seed);
        const double gamma = gamma_c(rho);
        const double slack = gamma - 1.0;
        result.worst = std::max(result.worst, slack);
        if (slack > 1e-8) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "max (Gamma_C - 1) = " << result.worst;
    result.detail = os.str();
    return result;
}

SuiteResult local_unitary_invariance(const Options& opt) {
    SuiteResult result{"commutation spectrum invariant under local unitaries", true, opt.trials,
                       0.0, 0, ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec = mixed_state_spec(t);
        const ObservableSet m(spec);
        const DensityMatrix rho = random_density(spec, 1 + t % 4, seed);
        const Matrix u = random_local_unitary_product(spec, seed + 0x9e3779b97f4a7c15ull);
        const DensityMatrix rotated(u * rho.matrix() * u.adjoint(), spec);

        const RealVector before = commutation_matrix(rho, m).eigenvalues();
        const RealVector after = commutation_matrix(rotated, m).eigenvalues();
        const double drift = (before - after).cwiseAbs().maxCoeff();
        result.worst = std::max(result.worst, drift);
        if (drift > 1e-8) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "max spectrum drift " << result.worst;
    result.detail = os.str();
    return result;
}

SuiteResult pure_fast_path_equivalence(const Options& opt) {
    SuiteResult result{"pure fast path matches dense commutation matrix", true, opt.trials, 0.0, 0,
                       ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec = mixed_state_spec(t);
        const ObservableSet m(spec);
        const Ket psi = random_pure(spec, seed);
        const RealMatrix fast = commutation_matrix_pure(psi, m).entries();
        const RealMatrix dense = commutation_matrix(DensityMatrix::from_ket(psi), m).entries();
        const double gap = (fast - dense).cwiseAbs().maxCoeff();
        result.worst = std::max(result.worst, gap);
        if (gap > 1e-10) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "max entrywise gap " << result.worst;
    result.detail = os.str();
    return result;
}

SuiteResult power_identity(const Options& opt) {
    SuiteResult result{"power identity residual", true, opt.trials, 0.0, 0, ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec{3, 3};
        const DensityMatrix rho = random_state(spec, seed, t % 2 == 0);
        const BatteryHamiltonian h = random_battery(spec, seed + 101);
        Rng rng(seed + 202);
        const Matrix v = random_hermitian(spec.total_dim(), rng);

        const double residual = power_identity_residual(rho, h, v);
        result.worst = std::max(result.worst, residual);
        if (residual > 1e-8) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "max residual " << result.worst;
    result.detail = os.str();
    return result;
}

SuiteResult heisenberg_robertson(const Options& opt) {
    SuiteResult result{"Heisenberg-Robertson power bound", true, opt.trials, 0.0, 0, ""};
    for (int t = 0; t < opt.trials; ++t) {
        const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(t);
        const HilbertSpec spec = mixed_state_spec(t);
        const DensityMatrix rho = random_state(spec, seed, t % 2 == 1);
        const BatteryHamiltonian h = random_battery(spec, seed + 303);
        Rng rng(seed + 404);
        const Matrix v = random_hermitian(spec.total_dim(), rng);

        const double p = instantaneous_power(rho, h, v);
        const Matrix hd = h.matrix();
        const double var_h = (hd * hd * rho.matrix()).trace().real() -
                             std::pow((hd * rho.matrix()).trace().real(), 2);
        const double var_v = (v * v * rho.matrix()).trace().real() -
                             std::pow((v * rho.matrix()).trace().real(), 2);
        const double slack = std::abs(p) - 2.0 * std::sqrt(var_v * var_h);
        result.worst = std::max(result.worst, slack);
        if (slack > 1e-8) {
            result.pass = false;
            result.failing_seed = seed;
        }
    }
    std::ostringstream os;
    os << "max |P| - 2 sqrt(varV varH) = " << result.worst;
    result.detail = os.str();
    return result;
}

std::vector<SuiteResult> run_all(const Options& opt) {
    return {
        psd_commutation(opt),
        gamma_bounded_by_cells(opt),
        separable_no_advantage(opt),
        local_unitary_invariance(opt),
        pure_fast_path_equivalence(opt),
        power_identity(opt),
        heisenberg_robertson(opt),
    };
}

} // namespace qbat::props
