#pragma once

#include <cstdint>
#include <optional>

#include "emq/gates.hpp"

namespace emq {

/// State on n+1 qubits; the ancilla is qubit 0, the most significant
/// coordinate bit, so the |0> branch is the top half of the vector.
struct DilatedState {
    Vector amplitudes;  // length 2d
    int qubits = 0;     // n+1

    Index dim() const { return amplitudes.size(); }
    Index half() const { return amplitudes.size() / 2; }
};

enum class MeasureMode { PostSelectZero, Sample };

struct MeasurementRecord {
    double p0 = 0.0;
    int outcome = 0;  // 0 or 1; post-select mode always reports 0
    StateVector post_state;
};

DilatedState init_dilated(const StateVector& psi);

/// Applies one gate in place on an amplitude vector over `qubits` qubits.
void apply_gate(Vector& amplitudes, int qubits, const Gate& gate);

void apply_program(DilatedState& state, const DilationCircuit& circuit);

/// Multiplies the ancilla-|0> half by u0 (open control per the circuit
/// diagrams); the |1> half is untouched.
void controlled_lossless_step(DilatedState& state, const Matrix& u0);

MeasurementRecord measure_ancilla(const DilatedState& state, MeasureMode mode,
                                  std::uint64_t seed = 0);

/// Dense matrix of a gate program, built by applying it to basis states.
Matrix circuit_unitary(const DilationCircuit& circuit);

/// Max entrywise distance of two matrices after aligning global phase.
double phase_insensitive_distance(const Matrix& a, const Matrix& b);

}  // namespace emq
