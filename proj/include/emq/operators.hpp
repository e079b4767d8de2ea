#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstdint>
#include <vector>

#include "emq/medium.hpp"

namespace emq {

using Index = std::int64_t;
using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Uniform 1D grid, tangential field pinned to zero at both ends.
struct GridSpec {
    Index cells = 0;      // N_x
    double spacing = 1.0; // m
};

/// Coordinate map for the padded state vector.
///
/// Physical blocks are laid out as
///   [ E(cell) | H(cell) | P blocks | P_t blocks | padding ]
/// with the P_t coordinates (the dissipative ones) forming the trailing
/// contiguous block of the physical range. Drude poles carry no P block.
struct StateLayout {
    Index cells = 0;
    Index d_physical = 0;  // before padding
    Index d = 0;           // 2^n
    int qubits = 0;        // n
    Index r = 0;           // dissipative coordinate count

    // Per pole flags mirroring the medium's pole structure.
    struct PoleBlocks {
        bool has_electric = false;
        bool has_magnetic = false;
        bool electric_drude = false;  // omega0 == 0: no P block
        bool magnetic_drude = false;
        Index p_electric = -1;   // offset of electric P block, -1 if absent
        Index p_magnetic = -1;
        Index pt_electric = -1;  // offset of electric P_t block
        Index pt_magnetic = -1;
    };
    std::vector<PoleBlocks> poles;

    Index e_index(Index cell) const { return cell; }
    Index h_index(Index cell) const { return cells + cell; }
    Index p_index(Branch b, std::size_t l, Index cell) const {
        const Index off = (b == Branch::Electric) ? poles[l].p_electric : poles[l].p_magnetic;
        return off + cell;
    }
    Index pt_index(Branch b, std::size_t l, Index cell) const {
        const Index off = (b == Branch::Electric) ? poles[l].pt_electric : poles[l].pt_magnetic;
        return off + cell;
    }
    /// First dissipative coordinate; the block is [diss_offset, diss_offset + r).
    Index diss_offset() const { return d_physical - r; }
};

/// Hermitian lossless generator and diagonal dissipator, both d x d.
/// The dissipator stores the substituted rates g = 2*gamma on the
/// dissipative coordinates and zero everywhere else.
struct GeneratorPair {
    SparseMatrix d0;
    Eigen::VectorXd ddiss;  // diagonal, length d
    StateLayout layout;
};

struct StateVector {
    Vector amplitudes;        // length d, unit norm after encode
    double norm_scale = 0.0;  // E0 in J; scaled down by p0 after post-selection
};

struct Observables {
    double total_energy = 0.0;
    double electric_energy = 0.0;  // u-block share
    Eigen::VectorXd polarization;  // per cell
    Eigen::VectorXd magnetization; // per cell
};

StateLayout build_layout(const GridSpec& grid, const MediumSpec& medium);

/// Assembles D0 (curl + pole couplings) and the diagonal dissipator for a
/// per-cell medium assignment. All cells must share the layout-defining pole
/// structure of `media[0]`.
GeneratorPair build_generators(const StateLayout& layout, const GridSpec& grid,
                               const std::vector<MediumSpec>& media);

StateVector encode_initial_state(const Eigen::VectorXd& e_field,
                                 const Eigen::VectorXd& h_field,
                                 const StateLayout& layout, const GridSpec& grid,
                                 const MediumSpec& medium);

Observables observables(const StateVector& psi, const StateLayout& layout,
                        const GridSpec& grid, const std::vector<MediumSpec>& media);

}  // namespace emq
