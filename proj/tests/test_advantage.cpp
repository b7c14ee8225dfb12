#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbat/advantage.hpp"
#include "qbat/propsuite.hpp"
#include "qbat/rng.hpp"
#include "qbat/states.hpp"

#include <cmath>

using namespace qbat;

namespace {

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

DensityMatrix classical_two_qubit_mixture() {
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = rho(3, 3) = 0.5; // (|00><00| + |11><11|)/2
    return {rho, HilbertSpec{2, 2}};
}

Matrix pauli_y() {
    Matrix sy(2, 2);
    sy << 0, Complex(0, -1), Complex(0, 1), 0;
    return sy;
}

Matrix pauli_z() {
    Matrix sz(2, 2);
    sz << 1, 0, 0, -1;
    return sz;
}

// Energy derivative under Eq.-(1) evolution, via the eigenbasis of V.
double finite_difference_power(const DensityMatrix& rho, const BatteryHamiltonian& h,
                               const Matrix& v, double step) {
    const auto eig = hermitian_eigendecomposition(v);
    const Matrix hd = h.matrix();
    auto energy_at = [&](double t) {
        Vector phases(eig.values.size());
        for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
            phases(k) = std::exp(Complex(0.0, -eig.values(k) * t));
        }
        const Matrix u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
        return (hd * u * rho.matrix() * u.adjoint()).trace().real();
    };
    return (energy_at(step) - energy_at(-step)) / (2.0 * step);
}

} // namespace

TEST_CASE("covariance matrix fixed values") {
    // Single-qubit |0>: product-state norm 1/2.
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    const DensityMatrix qubit(zero, HilbertSpec{2});
    CHECK(covariance_matrix(qubit, ObservableSet(HilbertSpec{2})).norm() ==
          doctest::Approx(0.5).epsilon(1e-10));

    // The classically correlated mixture inflates the covariance norm to 1.
    const DensityMatrix mix = classical_two_qubit_mixture();
    CHECK(covariance_matrix(mix, ObservableSet(mix.spec())).norm() ==
          doctest::Approx(1.0).epsilon(1e-10));

    // Maximally mixed two qubits: diagonal 1/2 on non-identity observables.
    const DensityMatrix mm(Matrix::Identity(4, 4) / 4.0, HilbertSpec{2, 2});
    const ObservableSet m(mm.spec());
    const CovarianceMatrix cov = covariance_matrix(mm, m);
    for (int mu = 0; mu < m.size(); ++mu) {
        for (int nu = 0; nu < m.size(); ++nu) {
            const double expected =
                (mu == nu && !m.is_identity_element(mu)) ? 0.5 : 0.0;
            CHECK(std::abs(cov.entries()(mu, nu) - expected) < 1e-12);
        }
    }
}

TEST_CASE("commutation matrix fixed values") {
    const DensityMatrix mm(Matrix::Identity(4, 4) / 4.0, HilbertSpec{2, 2});
    const CommutationMatrix zero = commutation_matrix(mm, ObservableSet(mm.spec()));
    CHECK(zero.entries().cwiseAbs().maxCoeff() < 1e-12);

    const DensityMatrix mix = classical_two_qubit_mixture();
    CHECK(commutation_matrix(mix, ObservableSet(mix.spec())).norm() ==
          doctest::Approx(1.0).epsilon(1e-10));

    CHECK(gamma_c(DensityMatrix::from_ket(qutrit_initial())) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("pure fast path agrees with the dense route") {
    const ObservableSet m(HilbertSpec{3, 3});
    for (int t = 0; t < 25; ++t) {
        const Ket psi = random_pure(HilbertSpec{3, 3}, 50 + t);
        const RealMatrix fast = commutation_matrix_pure(psi, m).entries();
        const RealMatrix dense =
            commutation_matrix(DensityMatrix::from_ket(psi), m).entries();
        CHECK((fast - dense).cwiseAbs().maxCoeff() <= 1e-10);
    }

    // Product pure state: twice the product covariance value.
    const DensityMatrix prod = random_separable(HilbertSpec{2, 2}, 1, 77);
    CHECK(gamma_c(prod) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(gamma_c(w_state(3)) == doctest::Approx(7.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("gamma_c closed forms") {
    CHECK(gamma_c(ghz_two_qudit(4)) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(gamma_c(ghz_two_qudit(5)) == doctest::Approx(0.8).epsilon(1e-11));
    for (int n = 2; n <= 8; ++n) {
        CHECK(gamma_c(w_state(n)) ==
              doctest::Approx((3.0 * n - 2.0) / n).epsilon(1e-11));
    }
}

TEST_CASE("instantaneous power fixed cases") {
    const HilbertSpec qubit{2};
    const BatteryHamiltonian h = battery_hamiltonian(qubit, {pauli_z()});

    // V = H: commutator vanishes.
    Matrix plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    const DensityMatrix rho(plus, qubit);
    CHECK(std::abs(instantaneous_power(rho, h, pauli_z())) < 1e-12);

    // d<sigma_z>/dt under V = sigma_y from |+>: -2<sigma_x> = -2. The
    // finite-difference energy derivative pins the sign.
    const double p = instantaneous_power(rho, h, pauli_y());
    CHECK(p == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(finite_difference_power(rho, h, pauli_y(), 1e-6) ==
          doctest::Approx(p).epsilon(1e-4));

    // [rho, V] = 0: no power.
    Matrix zstate = Matrix::Zero(2, 2);
    zstate(0, 0) = 1.0;
    const DensityMatrix rz(zstate, qubit);
    CHECK(std::abs(instantaneous_power(rz, h, pauli_z())) < 1e-12);
}

TEST_CASE("instantaneous power matches the finite-difference oracle") {
    for (int t = 0; t < 10; ++t) {
        const HilbertSpec spec{3, 3};
        const DensityMatrix rho = (t % 2 == 0)
                                      ? DensityMatrix::from_ket(random_pure(spec, 400 + t))
                                      : random_density(spec, 3, 400 + t);
        const BatteryHamiltonian h = random_battery(spec, 500 + t);
        Rng rng(600 + t);
        const Matrix v = random_hermitian(spec.total_dim(), rng);
        const double p = instantaneous_power(rho, h, v);
        const double fd = finite_difference_power(rho, h, v, 1e-6);
        CHECK(std::abs(p - fd) <= 1e-4 * std::max(1.0, std::abs(p)));
    }
}

TEST_CASE("kappa ranges") {
    const HilbertSpec spec{3, 3};
    Rng rng(31);
    const Matrix v = random_hermitian(9, rng);

    const DensityMatrix pure = DensityMatrix::from_ket(random_pure(spec, 9));
    CHECK(kappa(pure, v) == doctest::Approx(1.0).epsilon(1e-10));

    const DensityMatrix mixed(Matrix::Identity(9, 9) / 9.0, spec);
    CHECK(kappa(mixed, v) == doctest::Approx(2.0).epsilon(1e-10));

    for (int t = 0; t < 20; ++t) {
        const DensityMatrix rho = random_density(spec, 2 + t % 7, 700 + t);
        const double k = kappa(rho, v);
        CHECK(k >= 1.0 - 1e-9);
        CHECK(k <= 2.0 + 1e-9);
    }

    CHECK_THROWS_AS(kappa(pure, Matrix::Identity(9, 9)), DegenerateDriving);
}

TEST_CASE("theorem bound saturates under the optimal construction") {
    for (int t = 0; t < 10; ++t) {
        const HilbertSpec spec{3, 3};
        const Ket psi = random_pure(spec, 800 + t);
        const ObservableSet m(spec);
        const CommutationMatrix gc = commutation_matrix_pure(psi, m);
        const BatteryHamiltonian h = hamiltonian_from_direction(m, gc.top_eigenvector(), 1.0);
        const DensityMatrix rho = DensityMatrix::from_ket(psi);
        const Matrix v = optimal_driving(rho, h, 1.0);
        const PowerReport report = power_bound(rho, h, v);

        CHECK(report.kappa == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(report.power / report.bound >= 1.0 - 1e-6);
        CHECK(report.power / report.bound <= 1.0 + 1e-8);
        CHECK(report.cos_theta_v == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(report.cos_theta_h == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("bound holds for uncorrelated eigenstate mixtures") {
    // rho commuting with H: zero power, positive bound.
    const HilbertSpec spec{2, 2};
    const BatteryHamiltonian h =
        battery_hamiltonian(spec, {pauli_z(), pauli_z()});
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 0.6;
    rho(3, 3) = 0.4;
    const DensityMatrix dm(rho, spec);
    Rng rng(901);
    const Matrix v = random_hermitian(4, rng);
    const PowerReport report = power_bound(dm, h, v);
    CHECK(std::abs(report.power) <= report.bound + 1e-12);
}

TEST_CASE("commutation matrix removes the classical-correlation inflation") {
    const DensityMatrix mix = classical_two_qubit_mixture();
    const ObservableSet m(mix.spec());
    const double cov_norm = covariance_matrix(mix, m).norm();
    const double gamma = commutation_matrix(mix, m).norm();
    CHECK(cov_norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(gamma == doctest::Approx(1.0).epsilon(1e-9));

    // Theorem-1 bound with Gamma_C is tighter than the covariance bound
    // built from ||gamma|| = 1 for every driving.
    const BatteryHamiltonian h = battery_hamiltonian(mix.spec(), {pauli_z(), pauli_z()});
    Rng rng(902);
    for (int t = 0; t < 5; ++t) {
        const Matrix v = random_hermitian(4, rng);
        const PowerReport report = power_bound(mix, h, v);
        const double covariance_bound =
            2.0 * std::sqrt(cov_norm * h.gap_norm() * report.driving_variance);
        CHECK(report.bound <= covariance_bound + 1e-10);
        CHECK(std::abs(report.power) <= report.bound + 1e-10);
    }
}

TEST_CASE("optimal driving structure for a pure state") {
    const HilbertSpec spec{3, 3};
    const Ket psi = random_pure(spec, 111);
    const DensityMatrix rho = DensityMatrix::from_ket(psi);
    const BatteryHamiltonian h = random_battery(spec, 112);
    const double scale = 1.7;
    const Matrix v = optimal_driving(rho, h, scale);

    CHECK(is_hermitian(v));

    // In the rho eigenbasis: no support-support block, no null-null block,
    // and the support-null block equals -i c h there.
    const Matrix proj = rho.matrix();
    const Matrix comp = Matrix::Identity(9, 9) - proj;
    CHECK((proj * v * proj).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((comp * v * comp).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix expected = Complex(0.0, -scale) * (proj * h.matrix() * comp) +
                            Complex(0.0, scale) * (comp * h.matrix() * proj);
    CHECK((v - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("optimal driving satisfies the saturation condition") {
    for (int t = 0; t < 10; ++t) {
        const HilbertSpec spec{3, 3};
        const DensityMatrix rho = (t % 2 == 0)
                                      ? DensityMatrix::from_ket(random_pure(spec, 120 + t))
                                      : random_density(spec, 2 + t % 4, 120 + t);
        const BatteryHamiltonian h = random_battery(spec, 130 + t);
        const Matrix v = optimal_driving(rho, h, 1.0);

        const Matrix s = psd_sqrt(rho.matrix());
        const Matrix hd = h.matrix();
        const Matrix anti = s * v + v * s;
        const Matrix comm = hd * s - s * hd;
        const double ratio = std::sqrt(anti.squaredNorm() / comm.squaredNorm());
        const Matrix residual = anti - Complex(0.0, ratio) * comm;
        CHECK(residual.norm() <= 1e-8 * anti.norm());

        CHECK(angles(rho, h, v).cos_theta_v == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("optimal driving rejects stationary states") {
    const HilbertSpec spec{2, 2};
    const BatteryHamiltonian h = battery_hamiltonian(spec, {pauli_z(), pauli_z()});
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 0.25;
    rho(1, 1) = 0.25;
    rho(2, 2) = 0.25;
    rho(3, 3) = 0.25;
    CHECK_THROWS_AS(optimal_driving(DensityMatrix(rho, spec), h, 1.0), UnchargeableState);
}

TEST_CASE("angles fixed and random cases") {
    const HilbertSpec spec{3, 3};
    for (int t = 0; t < 10; ++t) {
        const DensityMatrix rho = random_density(spec, 2 + t % 5, 140 + t);
        const BatteryHamiltonian h = random_battery(spec, 150 + t);
        Rng rng(160 + t);
        const Matrix v = random_hermitian(9, rng);
        const Angles a = angles(rho, h, v);
        // Cauchy-Schwarz keeps both cosines in [0, 1].
        CHECK(a.cos_theta_v >= 0.0);
        CHECK(a.cos_theta_v <= 1.0 + 1e-9);
        CHECK(a.cos_theta_h >= 0.0);
        CHECK(a.cos_theta_h <= 1.0 + 1e-9);
    }

    const DensityMatrix rho = random_density(spec, 3, 170);
    const BatteryHamiltonian h = random_battery(spec, 171);
    const Angles self = angles(rho, h, h.matrix());
    CHECK(self.cos_theta_v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("power identity holds for random triples") {
    const HilbertSpec spec{3, 3};
    for (int t = 0; t < 30; ++t) {
        const DensityMatrix rho = (t % 2 == 0)
                                      ? DensityMatrix::from_ket(random_pure(spec, 180 + t))
                                      : random_density(spec, 2 + t % 6, 180 + t);
        const BatteryHamiltonian h = random_battery(spec, 190 + t);
        Rng rng(200 + t);
        const Matrix v = random_hermitian(9, rng);
        CHECK(power_identity_residual(rho, h, v) <= 1e-8);
    }

    const DensityMatrix rho = random_density(spec, 3, 210);
    const BatteryHamiltonian h = random_battery(spec, 211);
    CHECK(power_identity_residual(rho, h, h.matrix()) <= 1e-8);
}

TEST_CASE("normalize_driving pins the instantaneous speed limit") {
    const HilbertSpec spec{3, 3};
    const DensityMatrix rho = random_density(spec, 4, 220);
    const BatteryHamiltonian h = random_battery(spec, 221);
    Rng rng(222);
    const Matrix v = random_hermitian(9, rng);

    const double target = 0.9;
    const Matrix scaled = normalize_driving(v, rho, target);
    const double mean = (scaled * rho.matrix()).trace().real();
    const double second = (scaled * scaled * rho.matrix()).trace().real();
    const double rms = std::sqrt(second - mean * mean);
    CHECK(rms / std::sqrt(2.0) == doctest::Approx(target).epsilon(1e-12));

    // Scaling V leaves cos(theta_V) alone and scales P with the bound.
    const Angles before = angles(rho, h, v);
    const Angles after = angles(rho, h, scaled);
    CHECK(before.cos_theta_v == doctest::Approx(after.cos_theta_v).epsilon(1e-9));

    const PowerReport r1 = power_bound(rho, h, v);
    const PowerReport r2 = power_bound(rho, h, scaled);
    CHECK(r1.power / r1.bound == doctest::Approx(r2.power / r2.bound).epsilon(1e-9));

    CHECK_THROWS_AS(normalize_driving(Matrix::Identity(9, 9), rho, 1.0), DegenerateDriving);
}

TEST_CASE("ame5 commutation matrix is the non-identity projector") {
    const Ket psi = ame5_fixture();
    const ObservableSet m(psi.spec());
    const CommutationMatrix gc = commutation_matrix_pure(psi, m);
    for (int mu = 0; mu < m.size(); ++mu) {
        for (int nu = 0; nu < m.size(); ++nu) {
            double expected = 0.0;
            if (mu == nu && !m.is_identity_element(mu)) {
                expected = 1.0;
            }
            CHECK(std::abs(gc.entries()(mu, nu) - expected) < 1e-8);
        }
    }
    CHECK(gc.norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("property suites pass at module scale") {
    props::Options opt;
    opt.trials = 40;
    opt.seed0 = 1;
    for (const auto& result : props::run_all(opt)) {
        INFO(result.name, ": ", result.detail);
        CHECK(result.pass);
    }
}

TEST_CASE("the PSD suite detects a sign error in the commutation matrix") {
    props::Options opt;
    opt.trials = 10;
    opt.seed0 = 1;
    opt.mutate_sign = true;
    CHECK(!props::psd_commutation(opt).pass);
}
