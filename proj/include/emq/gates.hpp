#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "emq/operators.hpp"

namespace emq {

enum class GateKind {
    X,
    H,
    RotY,
    RotZ,
    Phase,  // diag(1, e^{i*angle})
    Cnot,
    MultiCtrlRotY,  // pre-expansion form, positive controls
    TwoLevel,       // structured two-level y-rotation on coordinate pair
    Diagonal,       // structured diagonal phase block on the full register
    Dense,          // fallback: explicit matrix on the full register
};

struct Gate {
    GateKind kind;
    int target = -1;
    int control = -1;           // Cnot
    std::vector<int> controls;  // MultiCtrlRotY
    double angle = 0.0;         // RotY/RotZ/MultiCtrlRotY/TwoLevel
    Index coord_a = -1;         // TwoLevel
    Index coord_b = -1;
    Vector diag;                // Diagonal
    Matrix dense;               // Dense

    static Gate x(int t) { return {GateKind::X, t}; }
    static Gate h(int t) { return {GateKind::H, t}; }
    static Gate ry(int t, double a) { Gate g{GateKind::RotY, t}; g.angle = a; return g; }
    static Gate rz(int t, double a) { Gate g{GateKind::RotZ, t}; g.angle = a; return g; }
    static Gate phase(int t, double a) { Gate g{GateKind::Phase, t}; g.angle = a; return g; }
    static Gate cnot(int c, int t) { Gate g{GateKind::Cnot, t}; g.control = c; return g; }
    static Gate mcry(std::vector<int> cs, int t, double a) {
        Gate g{GateKind::MultiCtrlRotY, t};
        g.controls = std::move(cs);
        g.angle = a;
        return g;
    }
    static Gate two_level(Index a, Index b, double angle) {
        Gate g{GateKind::TwoLevel};
        g.coord_a = a;
        g.coord_b = b;
        g.angle = angle;
        return g;
    }
};

/// Ordered gate program on a fixed-width qubit register. Qubit 0 is the
/// most significant coordinate bit (the ancilla in dilated programs).
struct DilationCircuit {
    int qubits = 0;
    std::vector<Gate> gates;

    std::size_t cnot_count() const;
    std::size_t rotation_count() const;  // X, H, RotY, RotZ, Phase

    void push(Gate g) { gates.push_back(std::move(g)); }
};

/// Line-oriented text export: one gate per line, angles at 17 significant
/// digits. Structured/dense blocks are rejected; export expanded programs.
std::string export_circuit(const DilationCircuit& circuit);

}  // namespace emq
