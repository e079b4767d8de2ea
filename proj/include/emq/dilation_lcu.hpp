#pragma once

#include "emq/circuit.hpp"
#include "emq/kraus.hpp"

namespace emq {

/// Prepare/select/unprepare dilation of K0 = (K0z + K0z^+) / 2 with the
/// diagonal unitary K0z carrying e^{-i theta_j / 2} on dissipative
/// coordinates. select_diag is the 2d-long diagonal [K0z ; conj(K0z)].
struct LcuCircuit {
    Index d = 0;
    Vector select_diag;            // unit modulus, length 2d
    DilationCircuit synthesized;   // elementary gates for diag(select_diag)

    /// Full dilation program (H on ancilla, select, H on ancilla);
    /// gate_level swaps the structured diagonal for the synthesized gates.
    DilationCircuit program(bool gate_level) const;

    Matrix dense() const;  // verification scale
};

LcuCircuit build_lcu_dilation(const KrausPair& pair);

/// Synthesis of a diagonal unitary, exact up to global phase, into
/// alternating CNOT / z-rotation ladders (one multiplexed Rz per qubit),
/// with identity-angle gates elided and adjacent CNOT pairs cancelled.
DilationCircuit synthesize_diagonal(const Vector& select_diag,
                                    double elide_angle_below = 1e-15);

}  // namespace emq
