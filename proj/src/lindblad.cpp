#include "qbat/lindblad.hpp"

#include "qbat/advantage.hpp"
#include "qbat/entanglement.hpp"
#include "qbat/io.hpp"
#include "qbat/states.hpp"

#include <cmath>
#include <fstream>

namespace qbat::lindblad {

void Config::validate() const {
    if (d < 2) {
        throw InvalidParameter("lindblad: D must be >= 2");
    }
    if (kt <= 0.0) {
        throw InvalidParameter("lindblad: kT must be positive");
    }
    if (t_final <= 0.0) {
        throw InvalidParameter("lindblad: t_final must be positive");
    }
    if (dt <= 0.0 || dt * g > 1e-2) {
        throw InvalidParameter("lindblad: dt*g must be positive and <= 1e-2");
    }
    if (record_every < 1) {
        throw InvalidParameter("lindblad: record_every must be >= 1");
    }
    if (omega0 <= 0.0 || g <= 0.0) {
        throw InvalidParameter("lindblad: omega0 and g must be positive");
    }
}

double photon_occupation(double omega, double kt) {
    if (omega <= 0.0 || kt <= 0.0) {
        throw InvalidParameter("photon_occupation: omega and kT must be positive");
    }
    return 1.0 / std::expm1(omega / kt);
}

Matrix ladder_operator(int d) {
    if (d < 2) {
        throw InvalidParameter("ladder_operator: D must be >= 2");
    }
    Matrix a = Matrix::Zero(d, d);
    for (int k = 1; k < d; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    return a;
}

namespace {

// Precomputed two-cell operators for the right-hand side.
struct Context {
    HilbertSpec spec;
    Matrix h;                       // global battery Hamiltonian (diagonal)
    std::vector<Matrix> lower;      // a_i
    std::vector<Matrix> raise;      // a_i^dag
    std::vector<Matrix> lower_gram; // a_i^dag a_i
    std::vector<Matrix> raise_gram; // a_i a_i^dag
    double np = 0.0;
    double g = 0.0;

    explicit Context(const Config& cfg)
        : spec{cfg.d, cfg.d}, np(photon_occupation(cfg.omega0, cfg.kt)), g(cfg.g) {
        const Matrix a = ladder_operator(cfg.d);
        Matrix h_cell = Matrix::Zero(cfg.d, cfg.d);
        for (int k = 0; k < cfg.d; ++k) {
            h_cell(k, k) = cfg.omega0 * static_cast<double>(k + 1); // levels d = 1..D
        }
        h = Matrix::Zero(spec.total_dim(), spec.total_dim());
        for (int i = 0; i < 2; ++i) {
            h += embed_local(h_cell, spec, i);
            lower.push_back(embed_local(a, spec, i));
            raise.push_back(embed_local(a.adjoint(), spec, i));
            lower_gram.push_back(raise.back() * lower.back());
            raise_gram.push_back(lower.back() * raise.back());
        }
    }

    Matrix rhs(const Matrix& rho) const {
        // i[rho, H] for diagonal H is elementwise.
        Matrix out(rho.rows(), rho.cols());
        for (Eigen::Index r = 0; r < rho.rows(); ++r) {
            for (Eigen::Index c = 0; c < rho.cols(); ++c) {
                out(r, c) = Complex(0.0, 1.0) * rho(r, c) * (h(c, c) - h(r, r));
            }
        }
        for (std::size_t i = 0; i < lower.size(); ++i) {
            out.noalias() += (g * np) * (raise[i] * rho * lower[i]);
            out.noalias() -= (0.5 * g * np) * (rho * raise_gram[i] + raise_gram[i] * rho);
            out.noalias() += (g * (np + 1.0)) * (lower[i] * rho * raise[i]);
            out.noalias() -= (0.5 * g * (np + 1.0)) * (rho * lower_gram[i] + lower_gram[i] * rho);
        }
        return out;
    }
};

} // namespace

Matrix generator(const Matrix& rho, const Config& cfg) {
    cfg.validate();
    const Context ctx(cfg);
    if (rho.rows() != ctx.spec.total_dim() || rho.cols() != ctx.spec.total_dim()) {
        throw DimensionMismatch("lindblad generator: state dimension does not match (D, D)");
    }
    return ctx.rhs(rho);
}

Trace integrate(const Config& cfg, const DensityMatrix& rho0) {
    cfg.validate();
    const Context ctx(cfg);
    if (rho0.spec() != ctx.spec) {
        throw DimensionMismatch("lindblad integrate: initial state must live on (D, D)");
    }

    const ObservableSet observables(ctx.spec);
    const auto embedded = observables.embedded_all();
    const Bipartition cut{{0}};

    Matrix rho = rho0.matrix();
    const long steps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));

    Trace trace;
    double drift = 0.0;

    auto record = [&](long step) {
        // PSD within integration tolerance; round-off within the clamp
        // window is repaired, anything worse aborts the run.
        Matrix sqrt_rho;
        try {
            sqrt_rho = psd_sqrt_with_floor(rho, -1e-6);
        } catch (const NotPositiveSemidefinite&) {
            throw IntegrationUnstable(
                "lindblad integrate: state left the PSD cone; reduce dt");
        }
        trace.times.push_back(static_cast<double>(step) * cfg.dt);
        trace.gamma_c.push_back(commutation_matrix_from_sqrt(sqrt_rho, observables, embedded).norm());
        const DensityMatrix snapshot(rho, ctx.spec);
        trace.negativity.push_back(negativity(snapshot, cut));
        trace.trace_error.push_back(drift);
    };

    record(0);
    for (long step = 1; step <= steps; ++step) {
        const Matrix k1 = ctx.rhs(rho);
        const Matrix k2 = ctx.rhs(rho + (0.5 * cfg.dt) * k1);
        const Matrix k3 = ctx.rhs(rho + (0.5 * cfg.dt) * k2);
        const Matrix k4 = ctx.rhs(rho + cfg.dt * k3);
        rho += (cfg.dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        rho = 0.5 * (rho + rho.adjoint()).eval();
        drift = std::abs(rho.trace().real() - 1.0);
        rho /= rho.trace().real();

        if (step % cfg.record_every == 0 || step == steps) {
            record(step);
        }
    }
    return trace;
}

Trace integrate(const Config& cfg) {
    cfg.validate();
    return integrate(cfg, DensityMatrix::from_ket(ghz_two_qudit(cfg.d)));
}

void write_csv(const Trace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw InvalidParameter("lindblad write_csv: cannot open " + path);
    }
    out << "t,gamma_c,negativity,trace_error\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k) {
        out << io::g17(trace.times[k]) << ',' << io::g17(trace.gamma_c[k]) << ','
            << io::g17(trace.negativity[k]) << ',' << io::g17(trace.trace_error[k]) << '\n';
    }
}

} // namespace qbat::lindblad
