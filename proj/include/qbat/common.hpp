// common.hpp — Shared aliases, numeric tolerances, and the error hierarchy.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qbat {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Tolerances used across modules. Operation-specific thresholds live with
// their operation; these are the ones shared by more than one module.
inline constexpr double kHermitianTol    = 1e-10;  // relative, entrywise
inline constexpr double kTraceTol        = 1e-10;  // density-matrix trace
inline constexpr double kKetNormTol      = 1e-12;
inline constexpr double kPsdClampFloor   = -1e-10; // eigenvalues in [floor, 0) -> 0
inline constexpr double kDegenerateTol   = 1e-14;  // variance denominators
inline constexpr double kSupportTol      = 1e-12;  // sqrt(rho) null-sector cutoff

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidOperator : public Error {
public:
    using Error::Error;
};

class NotPositiveSemidefinite : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class ZeroHamiltonian : public Error {
public:
    using Error::Error;
};

class DegenerateDriving : public Error {
public:
    using Error::Error;
};

class UnchargeableState : public Error {
public:
    using Error::Error;
};

class IntegrationUnstable : public Error {
public:
    using Error::Error;
};

} // namespace qbat
