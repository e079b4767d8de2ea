#include "emq/kraus.hpp"

#include <cmath>

namespace emq {

Matrix KrausPair::k1_dense() const {
    Matrix k1 = Matrix::Zero(d, d);
    for (Index j = 0; j < r; ++j) k1(j, diss_offset + j) = kappa[j];
    return k1;
}

KrausPair build_kraus_pair(const GeneratorPair& gen, double dt) {
    if (dt < 0.0) throw NegativeTimeStep("dt must be >= 0");

    const StateLayout& layout = gen.layout;
    KrausPair pair;
    pair.d = layout.d;
    pair.diss_offset = layout.diss_offset();
    pair.r = layout.r;
    pair.dt = dt;

    pair.k0_diag = (-dt * gen.ddiss.array()).exp();
    pair.gamma_diag.resize(pair.r);
    pair.kappa.resize(pair.r);
    pair.thetas.resize(pair.r);
    for (Index j = 0; j < pair.r; ++j) {
        const double g = pair.k0_diag[pair.diss_offset + j];
        pair.gamma_diag[j] = g;
        pair.kappa[j] = std::sqrt(std::max(0.0, 1.0 - g * g));
        pair.thetas[j] = 2.0 * std::acos(std::min(1.0, g));
    }
    return pair;
}

Matrix apply_channel_density(const Matrix& rho, const KrausPair& pair) {
    if (pair.d > 64) throw DimensionTooLarge("density-matrix channel is capped at d = 64");
    if (rho.rows() != pair.d || rho.cols() != pair.d)
        throw DimensionMismatch("density matrix dimension does not match the Kraus pair");

    const auto k0 = pair.k0_diag.cast<Complex>().asDiagonal();
    Matrix out = k0 * rho * k0;
    const Matrix k1 = pair.k1_dense();
    out += k1 * rho * k1.adjoint();
    return out;
}

}  // namespace emq
