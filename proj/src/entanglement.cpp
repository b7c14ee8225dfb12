#include "qbat/entanglement.hpp"

#include <cmath>

namespace qbat {

double negativity(const DensityMatrix& rho, const Bipartition& cut) {
    return 0.5 * (trace_norm(partial_transpose(rho, cut.subset_a)) - 1.0);
}

double entanglement_entropy(const Ket& psi, const std::vector<int>& subset) {
    const Matrix reduced = ket_reduced_density(psi.amplitudes(), psi.spec(), subset);
    const auto eig = hermitian_eigendecomposition(reduced);
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        const double p = eig.values(k);
        if (p > 1e-14) {
            entropy -= p * std::log(p);
        }
    }
    return entropy;
}

double two_uniformity_deficit(const Ket& psi) {
    const HilbertSpec& spec = psi.spec();
    const int cells = spec.cells();
    double worst = 0.0;

    auto deficit = [&](const std::vector<int>& subset) {
        const Matrix reduced = ket_reduced_density(psi.amplitudes(), spec, subset);
        const long d = reduced.rows();
        const Matrix delta = reduced - Matrix::Identity(d, d) / static_cast<double>(d);
        const auto eig = hermitian_eigendecomposition(delta);
        return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
    };

    for (int i = 0; i < cells; ++i) {
        if (cells > 1) {
            worst = std::max(worst, deficit({i}));
        }
        for (int j = i + 1; j < cells; ++j) {
            if (cells > 2) {
                worst = std::max(worst, deficit({i, j}));
            }
        }
    }
    return worst;
}

} // namespace qbat
