#pragma once

#include "emq/operators.hpp"

namespace emq {

/// The non-unitary Trotter factor K0 = exp(-dt * Ddiss) and its completion K1.
/// K1 is kept implicit: it moves amplitude from dissipative coordinate
/// diss_offset + j to leading coordinate j with weight sqrt(1 - Gamma_j^2).
struct KrausPair {
    Eigen::VectorXd k0_diag;     // length d
    Eigen::VectorXd gamma_diag;  // the r diagonal entries Gamma_jj
    Eigen::VectorXd kappa;       // sqrt(1 - Gamma_jj^2)
    Eigen::VectorXd thetas;      // 2*acos(Gamma_jj), in [0, pi]
    Index d = 0;
    Index diss_offset = 0;       // first dissipative coordinate
    Index r = 0;
    double dt = 0.0;

    Matrix k1_dense() const;     // verification scale only
};

KrausPair build_kraus_pair(const GeneratorPair& gen, double dt);

/// Augmented amplitude-damping channel rho -> K0 rho K0^+ + K1 rho K1^+.
/// Verification-scale only (d <= 64).
Matrix apply_channel_density(const Matrix& rho, const KrausPair& pair);

}  // namespace emq
