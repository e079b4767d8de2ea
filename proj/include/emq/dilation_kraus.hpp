#pragma once

#include "emq/circuit.hpp"
#include "emq/kraus.hpp"

namespace emq {

/// Two-level y-rotation between computational-basis coordinates a < b:
/// [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on span{a, b}, identity elsewhere.
struct TwoLevelRotation {
    Index coord_a = 0;
    Index coord_b = 0;
    double angle = 0.0;
};

/// Structured single-ancilla dilation of K0 on 2d coordinates: identity
/// outside r disjoint coordinate pairs, a y-rotation by theta_j on each.
/// Pair j couples (ancilla 0, dissipative coordinate) with
/// (ancilla 1, leading coordinate j).
struct KrausDilation {
    Index d = 0;
    Index diss_offset = 0;
    Index r = 0;
    Eigen::VectorXd gamma_diag;  // cos(theta_j / 2)

    Matrix dense() const;                   // 2d x 2d, verification scale
    void apply(Vector& amplitudes) const;   // O(r) amplitude pairs
};

KrausDilation build_udiss_kraus(const KrausPair& pair);

/// The r commuting two-level rotations whose product is the dilation.
std::vector<TwoLevelRotation> decompose_two_level(const KrausDilation& u);

struct SynthesisOptions {
    bool expand_multi_controlled = true;
    double elide_angle_below = 1e-15;
};

/// Elementary-gate program for a product of two-level rotations on a
/// `qubits`-wide register. Each rotation becomes a CNOT conjugation that
/// aligns the coordinate pair on one qubit plus a multi-controlled
/// y-rotation, expanded to CNOTs and single-qubit gates.
DilationCircuit synthesize_gates(const std::vector<TwoLevelRotation>& rotations, int qubits,
                                 const SynthesisOptions& options = {});

/// Multi-controlled X on positive controls, expanded to CNOT + single-qubit
/// gates; `borrowable` qubits may be used as dirty ancillas.
void emit_mcx(DilationCircuit& circuit, const std::vector<int>& controls, int target,
              const std::vector<int>& borrowable);

/// Multi-controlled Ry on positive controls, expanded recursively.
void emit_mcry(DilationCircuit& circuit, const std::vector<int>& controls, int target,
               double angle);

}  // namespace emq
