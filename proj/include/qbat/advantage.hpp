// advantage.hpp — Covariance and commutation matrices over a local
// observable set, the charging advantage Gamma_C, instantaneous power, the
// power bound with its saturation construction, and the angle identity.

#pragma once

#include "qbat/linalg.hpp"
#include "qbat/observables.hpp"

namespace qbat {

class CovarianceMatrix {
public:
    CovarianceMatrix(RealMatrix entries, const HilbertSpec& spec);

    const RealMatrix& entries() const { return entries_; }
    double norm() const { return norm_; }
    double min_eigenvalue() const { return min_eig_; }

private:
    RealMatrix entries_;
    double norm_ = 0.0;
    double min_eig_ = 0.0;
};

class CommutationMatrix {
public:
    CommutationMatrix(RealMatrix entries, const HilbertSpec& spec);

    const RealMatrix& entries() const { return entries_; }
    double norm() const { return norm_; }                 // Gamma_C
    double min_eigenvalue() const { return min_eig_; }
    const RealVector& top_eigenvector() const { return top_; }
    RealVector eigenvalues() const;                       // ascending

private:
    RealMatrix entries_;
    RealVector eigenvalues_;
    RealVector top_;
    double norm_ = 0.0;
    double min_eig_ = 0.0;
};

// One (rho, H, V) evaluation of the Theorem-1 bound and its angle split.
struct PowerReport {
    double power = 0.0;             // tr(iH[rho,V])
    double bound = 0.0;             // sqrt(2 kappa Gamma_C gap_norm <dV^2>)
    double kappa = 0.0;             // in [1, 2]
    double gamma_c = 0.0;
    double cos_theta_v = 0.0;
    double cos_theta_h = 0.0;
    double driving_variance = 0.0;  // <dV^2>
    double gap_norm = 0.0;          // sum_i tr(H_i^2)
};

struct Angles {
    double cos_theta_v = 0.0;
    double cos_theta_h = 0.0;
};

CovarianceMatrix covariance_matrix(const DensityMatrix& rho, const ObservableSet& m);

CommutationMatrix commutation_matrix(const DensityMatrix& rho, const ObservableSet& m);

// Entries from a precomputed PSD square root; `embedded` may be empty, in
// which case the embedded observables are built on the fly.
CommutationMatrix commutation_matrix_from_sqrt(const Matrix& sqrt_rho, const ObservableSet& m,
                                               const std::vector<Matrix>& embedded = {});

// Pure-state fast path: gamma_C = 2 gamma, assembled from one- and two-cell
// reduced density matrices without any total-dimension-squared square root.
CommutationMatrix commutation_matrix_pure(const Ket& psi, const ObservableSet& m);

double gamma_c(const Ket& psi);
double gamma_c(const DensityMatrix& rho);

double instantaneous_power(const DensityMatrix& rho, const BatteryHamiltonian& h, const Matrix& v);

double kappa(const DensityMatrix& rho, const Matrix& v);

double theorem_bound(double kappa, double gamma_c, double gap_norm, double driving_variance);

PowerReport power_bound(const DensityMatrix& rho, const BatteryHamiltonian& h, const Matrix& v);

// Driving Hamiltonian saturating the Cauchy-Schwarz condition for (rho, H),
// scaled by `scale`. Throws UnchargeableState when [H, sqrt(rho)] vanishes.
Matrix optimal_driving(const DensityMatrix& rho, const BatteryHamiltonian& h, double scale);

Angles angles(const DensityMatrix& rho, const BatteryHamiltonian& h, const Matrix& v);

// |P^2 - 2 kappa Gamma_C gap_norm <dV^2> cos(theta_V) cos(theta_H)| / max(P^2, eps).
double power_identity_residual(const DensityMatrix& rho, const BatteryHamiltonian& h,
                               const Matrix& v);

// Rescales V so sqrt(<dV^2>) = delta_e_single * sqrt(N).
Matrix normalize_driving(const Matrix& v, const DensityMatrix& rho, double delta_e_single);

} // namespace qbat
