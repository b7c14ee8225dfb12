#include "qbat/advantage.hpp"

#include <cmath>
#include <sstream>

namespace qbat {

namespace {

constexpr double kIdentityResidualFloor = 1e-30;

void require_state_matches(const HilbertSpec& a, const HilbertSpec& b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": Hilbert specs do not match");
    }
}

void require_driving(const Matrix& v, long dim, const char* what) {
    if (v.rows() != dim || v.cols() != dim) {
        throw DimensionMismatch(std::string(what) + ": driving operator dimension mismatch");
    }
    if (!is_hermitian(v)) {
        throw InvalidOperator(std::string(what) + ": driving operator is not Hermitian");
    }
}

struct SymmetricEigens {
    RealVector values;
    RealMatrix vectors;
};

SymmetricEigens symmetric_eigens(const RealMatrix& g) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(g);
    if (solver.info() != Eigen::Success) {
        throw InvalidOperator("symmetric eigensolver failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double centered_variance(const DensityMatrix& rho, const Matrix& v) {
    const Complex mean = (v * rho.matrix()).trace();
    const Complex second = (v * v * rho.matrix()).trace();
    return second.real() - mean.real() * mean.real();
}

// -tr([H, S]^2) = ||[H, S]||_F^2 for Hermitian H, S.
double commutator_weight(const Matrix& h, const Matrix& s) {
    return (h * s - s * h).squaredNorm();
}

// Scalars shared by the bound, the angles, and the identity check.
struct BoundContext {
    double power = 0.0;          // tr(i[H,S]{S,V}) == tr(iH[rho,V])
    double hs2 = 0.0;            // -tr([H,S]^2)
    double anticomm2 = 0.0;      // tr({S, V - <V>}^2)
    double variance = 0.0;       // <dV^2>
    double kappa = 0.0;
};

BoundContext bound_context(const DensityMatrix& rho, const Matrix& s, const Matrix& h_dense,
                           const Matrix& v) {
    BoundContext ctx;
    const double mean = (v * rho.matrix()).trace().real();
    const Matrix centered = v - mean * Matrix::Identity(v.rows(), v.cols());
    const Matrix comm = h_dense * s - s * h_dense;
    const Matrix anti = s * centered + centered * s;

    ctx.hs2 = comm.squaredNorm();
    ctx.anticomm2 = anti.squaredNorm();
    ctx.power = (Complex(0.0, 1.0) * (comm * anti).trace()).real();
    ctx.variance = (centered * centered * rho.matrix()).trace().real();
    if (ctx.variance > kDegenerateTol) {
        const double cross = (s * centered * s * centered).trace().real();
        const double direct = (rho.matrix() * centered * centered).trace().real();
        ctx.kappa = (direct + cross) / ctx.variance;
    }
    return ctx;
}

} // namespace

CovarianceMatrix::CovarianceMatrix(RealMatrix entries, const HilbertSpec& spec)
    : entries_(std::move(entries)) {
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidOperator("CovarianceMatrix: entries are not symmetric");
    }
    const auto eig = symmetric_eigens(entries_);
    min_eig_ = eig.values(0);
    norm_ = eig.values(eig.values.size() - 1);
    if (min_eig_ < -1e-10) {
        throw NotPositiveSemidefinite("CovarianceMatrix: negative eigenvalue beyond tolerance");
    }
    (void)spec;
}

CommutationMatrix::CommutationMatrix(RealMatrix entries, const HilbertSpec& spec)
    : entries_(std::move(entries)) {
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidOperator("CommutationMatrix: entries are not symmetric");
    }
    auto eig = symmetric_eigens(entries_);
    eigenvalues_ = eig.values;
    min_eig_ = eig.values(0);
    norm_ = eig.values(eig.values.size() - 1);
    top_ = eig.vectors.col(eig.vectors.cols() - 1);
    if (min_eig_ < -1e-10) {
        throw NotPositiveSemidefinite("CommutationMatrix: negative eigenvalue beyond tolerance");
    }
    if (norm_ > static_cast<double>(spec.cells()) + 1e-8) {
        throw InvalidOperator("CommutationMatrix: norm exceeds the cell-count bound");
    }
}

RealVector CommutationMatrix::eigenvalues() const {
    return eigenvalues_;
}

CovarianceMatrix covariance_matrix(const DensityMatrix& rho, const ObservableSet& m) {
    require_state_matches(rho.spec(), m.spec(), "covariance_matrix");
    const auto embedded = m.embedded_all();
    const int count = m.size();

    std::vector<Matrix> weighted; // M_mu * rho
    weighted.reserve(static_cast<std::size_t>(count));
    RealVector means(count);
    for (int mu = 0; mu < count; ++mu) {
        weighted.push_back(embedded[static_cast<std::size_t>(mu)] * rho.matrix());
        means(mu) = weighted.back().trace().real();
    }

    RealMatrix g(count, count);
    for (int mu = 0; mu < count; ++mu) {
        for (int nu = mu; nu < count; ++nu) {
            // tr(rho M_mu M_nu) = tr(M_nu rho M_mu); real part is already the
            // symmetrized expectation.
            const Complex w =
                (weighted[static_cast<std::size_t>(nu)] * embedded[static_cast<std::size_t>(mu)])
                    .trace();
            const double value = w.real() - means(mu) * means(nu);
            g(mu, nu) = value;
            g(nu, mu) = value;
        }
    }
    return {std::move(g), rho.spec()};
}

CommutationMatrix commutation_matrix_from_sqrt(const Matrix& sqrt_rho, const ObservableSet& m,
                                               const std::vector<Matrix>& embedded) {
    const long d = sqrt_rho.rows();
    const int count = m.size();
    // Stack vec([M_mu, S]) as columns; the Gram matrix of the stack is
    // exactly -tr([M_mu,S][M_nu,S]) because the commutators are
    // anti-Hermitian.
    Matrix stack(d * d, count);
    for (int mu = 0; mu < count; ++mu) {
        const Matrix e = embedded.empty() ? m.embedded(mu) : embedded[static_cast<std::size_t>(mu)];
        const Matrix x = e * sqrt_rho - sqrt_rho * e;
        stack.col(mu) = Eigen::Map<const Vector>(x.data(), d * d);
    }
    const Matrix gram = stack.adjoint() * stack;
    RealMatrix g = 0.5 * (gram.real() + gram.real().transpose());
    return {std::move(g), m.spec()};
}

CommutationMatrix commutation_matrix(const DensityMatrix& rho, const ObservableSet& m) {
    require_state_matches(rho.spec(), m.spec(), "commutation_matrix");
    return commutation_matrix_from_sqrt(psd_sqrt(rho.matrix()), m);
}

CommutationMatrix commutation_matrix_pure(const Ket& psi, const ObservableSet& m) {
    require_state_matches(psi.spec(), m.spec(), "commutation_matrix_pure");
    const HilbertSpec& spec = psi.spec();
    const int cells = spec.cells();
    const int count = m.size();

    std::vector<Matrix> rdm1;
    rdm1.reserve(static_cast<std::size_t>(cells));
    for (int i = 0; i < cells; ++i) {
        rdm1.push_back(ket_reduced_density(psi.amplitudes(), spec, {i}));
    }

    RealVector means(count);
    for (int mu = 0; mu < count; ++mu) {
        means(mu) = (m.local(mu) * rdm1[static_cast<std::size_t>(m.cell_of(mu))]).trace().real();
    }

    RealMatrix g = RealMatrix::Zero(count, count);

    // Same-cell blocks: 2 [Re tr(rho_i A_a A_b) - <A_a><A_b>].
    for (int i = 0; i < cells; ++i) {
        const auto& basis = m.cell_basis(i);
        const int nb = static_cast<int>(basis.size());
        std::vector<Matrix> weighted;
        weighted.reserve(static_cast<std::size_t>(nb));
        for (int a = 0; a < nb; ++a) {
            weighted.push_back(rdm1[static_cast<std::size_t>(i)] * basis[static_cast<std::size_t>(a)]);
        }
        for (int a = 0; a < nb; ++a) {
            const int mu = m.flat_index(i, a);
            for (int b = a; b < nb; ++b) {
                const int nu = m.flat_index(i, b);
                const Complex w =
                    (weighted[static_cast<std::size_t>(a)] * basis[static_cast<std::size_t>(b)])
                        .trace();
                const double value = 2.0 * (w.real() - means(mu) * means(nu));
                g(mu, nu) = value;
                g(nu, mu) = value;
            }
        }
    }

    // Cross-cell blocks from two-cell reduced density matrices.
    for (int i = 0; i < cells; ++i) {
        const int ni = spec.dim(i);
        for (int j = i + 1; j < cells; ++j) {
            const int nj = spec.dim(j);
            const Matrix rdm2 = ket_reduced_density(psi.amplitudes(), spec, {i, j});
            const auto& ba = m.cell_basis(i);
            const auto& bb = m.cell_basis(j);
            for (int a = 0; a < static_cast<int>(ba.size()); ++a) {
                const int mu = m.flat_index(i, a);
                const Matrix& aa = ba[static_cast<std::size_t>(a)];
                for (int b = 0; b < static_cast<int>(bb.size()); ++b) {
                    const int nu = m.flat_index(j, b);
                    const Matrix& ab = bb[static_cast<std::size_t>(b)];
                    // tr(rho_ij (A (x) B)) with row-major two-cell indices.
                    Complex w(0.0, 0.0);
                    for (int r1 = 0; r1 < ni; ++r1) {
                        for (int r2 = 0; r2 < nj; ++r2) {
                            for (int c1 = 0; c1 < ni; ++c1) {
                                for (int c2 = 0; c2 < nj; ++c2) {
                                    w += rdm2(r1 * nj + r2, c1 * nj + c2) * aa(c1, r1) * ab(c2, r2);
                                }
                            }
                        }
                    }
                    const double value = 2.0 * (w.real() - means(mu) * means(nu));
                    g(mu, nu) = value;
                    g(nu, mu) = value;
                }
            }
        }
    }
    return {std::move(g), spec};
}

double gamma_c(const Ket& psi) {
    return commutation_matrix_pure(psi, ObservableSet(psi.spec())).norm();
}

double gamma_c(const DensityMatrix& rho) {
    return commutation_matrix(rho, ObservableSet(rho.spec())).norm();
}

double instantaneous_power(const DensityMatrix& rho, const BatteryHamiltonian& h, const Matrix& v) {
    require_state_matches(rho.spec(), h.spec(), "instantaneous_power");
    require_driving(v, rho.dim(), "instantaneous_power");
    const Matrix hd = h.matrix();
    const Matrix comm = rho.matrix() * v - v * rho.matrix();
    const Complex p = Complex(0.0, 1.0) * (hd * comm).trace();
    const double scale = std::max(1.0, hd.norm() * comm.norm());
    if (std::abs(p.imag()) > 1e-10 * scale) {
        throw InvalidOperator("instantaneous_power: nonreal power, inputs not Hermitian enough");
    }
    return p.real();
}

double kappa(const DensityMatrix& rho, const Matrix& v) {
    require_driving(v, rho.dim(), "kappa");
    const Matrix s = psd_sqrt(rho.matrix());
    const double mean = (v * rho.matrix()).trace().real();
    const Matrix centered = v - mean * Matrix::Identity(v.rows(), v.cols());
    const double variance = (centered * centered * rho.matrix()).trace().real();
    if (variance <= kDegenerateTol) {
        throw DegenerateDriving("kappa: driving variance is numerically zero");
    }
    const double cross = (s * centered * s * centered).trace().real();
    const double direct = (rho.matrix() * centered * centered).trace().real();
    return (direct + cross) / variance;
}

double theorem_bound(double kappa, double gamma_c, double gap_norm, double driving_variance) {
    return std::sqrt(2.0 * kappa * gamma_c * gap_norm * driving_variance);
}

PowerReport power_bound(const DensityMatrix& rho, const BatteryHamiltonian& h, const Matrix& v) {
    require_state_matches(rho.spec(), h.spec(), "power_bound");
    require_driving(v, rho.dim(), "power_bound");

    const Matrix s = psd_sqrt(rho.matrix());
    const ObservableSet m(rho.spec());
    const CommutationMatrix gc = commutation_matrix_from_sqrt(s, m);
    const BoundContext ctx = bound_context(rho, s, h.matrix(), v);
    if (ctx.variance <= kDegenerateTol) {
        throw DegenerateDriving("power_bound: driving variance is numerically zero");
    }

    PowerReport report;
    report.power = ctx.power;
    report.kappa = ctx.kappa;
    report.gamma_c = gc.norm();
    report.gap_norm = h.gap_norm();
    report.driving_variance = ctx.variance;
    report.bound = theorem_bound(ctx.kappa, gc.norm(), h.gap_norm(), ctx.variance);
    report.cos_theta_v =
        ctx.hs2 > kDegenerateTol ? ctx.power * ctx.power / (ctx.hs2 * ctx.anticomm2) : 0.0;
    report.cos_theta_h = ctx.hs2 / (gc.norm() * h.gap_norm());
    return report;
}

Matrix optimal_driving(const DensityMatrix& rho, const BatteryHamiltonian& h, double scale) {
    require_state_matches(rho.spec(), h.spec(), "optimal_driving");
    const Matrix hd = h.matrix();

    const auto eig = hermitian_eigendecomposition(rho.matrix());
    RealVector roots(eig.values.size());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double lambda = eig.values(k);
        if (lambda < kPsdClampFloor) {
            throw NotPositiveSemidefinite("optimal_driving: state eigenvalue below tolerance");
        }
        roots(k) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }

    const Matrix s = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    if (commutator_weight(hd, s) <= 1e-24) { // ||[H, sqrt(rho)]||_F <= 1e-12
        throw UnchargeableState("optimal_driving: [H, sqrt(rho)] vanishes; every driving yields P = 0");
    }

    const Matrix h_eig = eig.vectors.adjoint() * hd * eig.vectors;
    Matrix v_eig = Matrix::Zero(h_eig.rows(), h_eig.cols());
    for (Eigen::Index a = 0; a < h_eig.rows(); ++a) {
        for (Eigen::Index b = 0; b < h_eig.cols(); ++b) {
            const double denom = roots(a) + roots(b);
            if (denom <= kSupportTol) {
                continue; // null-sector entries contribute nothing to the power
            }
            v_eig(a, b) = Complex(0.0, scale) * ((roots(b) - roots(a)) / denom) * h_eig(a, b);
        }
    }
    Matrix v = eig.vectors * v_eig * eig.vectors.adjoint();
    return 0.5 * (v + v.adjoint());
}

Angles angles(const DensityMatrix& rho, const BatteryHamiltonian& h, const Matrix& v) {
    require_state_matches(rho.spec(), h.spec(), "angles");
    require_driving(v, rho.dim(), "angles");

    const Matrix s = psd_sqrt(rho.matrix());
    const BoundContext ctx = bound_context(rho, s, h.matrix(), v);
    if (ctx.hs2 <= kDegenerateTol) {
        throw UnchargeableState("angles: [H, sqrt(rho)] vanishes");
    }
    if (ctx.anticomm2 <= kDegenerateTol) {
        throw DegenerateDriving("angles: centered driving anticommutator vanishes");
    }

    const ObservableSet m(rho.spec());
    const CommutationMatrix gc = commutation_matrix_from_sqrt(s, m);

    Angles out;
    out.cos_theta_v = ctx.power * ctx.power / (ctx.hs2 * ctx.anticomm2);
    out.cos_theta_h = ctx.hs2 / (gc.norm() * h.gap_norm());
    return out;
}

double power_identity_residual(const DensityMatrix& rho, const BatteryHamiltonian& h,
                               const Matrix& v) {
    require_state_matches(rho.spec(), h.spec(), "power_identity_residual");
    require_driving(v, rho.dim(), "power_identity_residual");

    const Matrix s = psd_sqrt(rho.matrix());
    const BoundContext ctx = bound_context(rho, s, h.matrix(), v);
    if (ctx.variance <= kDegenerateTol) {
        throw DegenerateDriving("power_identity_residual: driving variance vanishes");
    }

    const ObservableSet m(rho.spec());
    const CommutationMatrix gc = commutation_matrix_from_sqrt(s, m);

    const double cos_v =
        ctx.hs2 > kDegenerateTol ? ctx.power * ctx.power / (ctx.hs2 * ctx.anticomm2) : 0.0;
    const double cos_h = ctx.hs2 / (gc.norm() * h.gap_norm());
    const double rhs =
        2.0 * ctx.kappa * gc.norm() * h.gap_norm() * ctx.variance * cos_v * cos_h;
    const double p2 = ctx.power * ctx.power;
    return std::abs(p2 - rhs) / std::max(p2, kIdentityResidualFloor);
}

Matrix normalize_driving(const Matrix& v, const DensityMatrix& rho, double delta_e_single) {
    require_driving(v, rho.dim(), "normalize_driving");
    const double variance = centered_variance(rho, v);
    if (variance <= kDegenerateTol) {
        throw DegenerateDriving("normalize_driving: driving variance is numerically zero");
    }
    const double target = delta_e_single * std::sqrt(static_cast<double>(rho.spec().cells()));
    return v * (target / std::sqrt(variance));
}

} // namespace qbat
