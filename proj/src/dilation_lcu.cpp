#include "emq/dilation_lcu.hpp"

#include <cmath>
#include <vector>

namespace emq {

DilationCircuit LcuCircuit::program(bool gate_level) const {
    DilationCircuit circuit;
    circuit.qubits = synthesized.qubits;
    circuit.push(Gate::h(0));
    if (gate_level) {
        for (const auto& g : synthesized.gates) circuit.push(g);
    } else {
        Gate sel{GateKind::Diagonal};
        sel.diag = select_diag;
        circuit.push(sel);
    }
    circuit.push(Gate::h(0));
    return circuit;
}

Matrix LcuCircuit::dense() const {
    const Index dim = 2 * d;
    Matrix h = Matrix::Zero(dim, dim);
    const double s = 1.0 / std::sqrt(2.0);
    for (Index q = 0; q < d; ++q) {
        h(q, q) = s;
        h(q, d + q) = s;
        h(d + q, q) = s;
        h(d + q, d + q) = -s;
    }
    return h * select_diag.asDiagonal() * h;
}

LcuCircuit build_lcu_dilation(const KrausPair& pair) {
    LcuCircuit lcu;
    lcu.d = pair.d;
    lcu.select_diag = Vector::Ones(2 * pair.d);
    for (Index j = 0; j < pair.r; ++j) {
        const Complex z = std::polar(1.0, -0.5 * pair.thetas[j]);
        lcu.select_diag[pair.diss_offset + j] = z;
        lcu.select_diag[pair.d + pair.diss_offset + j] = std::conj(z);
    }
    lcu.synthesized = synthesize_diagonal(lcu.select_diag);
    return lcu;
}

namespace {

// Multiplexed Rz: angles indexed by the control bits, msb control split.
void emit_ucrz(std::vector<Gate>& gates, int target, const std::vector<int>& control_qubits,
               const std::vector<double>& angles) {
    if (control_qubits.empty()) {
        gates.push_back(Gate::rz(target, angles[0]));
        return;
    }
    const std::size_t half = angles.size() / 2;
    std::vector<double> sum(half), diff(half);
    for (std::size_t i = 0; i < half; ++i) {
        sum[i] = 0.5 * (angles[i] + angles[i + half]);
        diff[i] = 0.5 * (angles[i] - angles[i + half]);
    }
    const int msb_control = control_qubits.back();
    std::vector<int> rest(control_qubits.begin(), control_qubits.end() - 1);
    emit_ucrz(gates, target, rest, sum);
    gates.push_back(Gate::cnot(msb_control, target));
    emit_ucrz(gates, target, rest, diff);
    gates.push_back(Gate::cnot(msb_control, target));
}

void cancel_pass(std::vector<Gate>& gates, double elide) {
    std::vector<Gate> kept;
    for (const auto& g : gates) {
        if ((g.kind == GateKind::RotZ || g.kind == GateKind::Phase) &&
            std::abs(g.angle) < elide)
            continue;
        if (g.kind == GateKind::Cnot && !kept.empty() && kept.back().kind == GateKind::Cnot &&
            kept.back().control == g.control && kept.back().target == g.target) {
            kept.pop_back();
            continue;
        }
        kept.push_back(g);
    }
    gates = std::move(kept);
}

}  // namespace

DilationCircuit synthesize_diagonal(const Vector& select_diag, double elide_angle_below) {
    const Index dim = select_diag.size();
    int qubits = 0;
    while ((Index{1} << qubits) < dim) ++qubits;
    if ((Index{1} << qubits) != dim)
        throw DimensionMismatch("diagonal length must be a power of two");
    for (Index x = 0; x < dim; ++x)
        if (std::abs(std::abs(select_diag[x]) - 1.0) > 1e-12)
            throw StructureViolation("diagonal entries must have unit modulus");

    auto qubit_of = [&](int bit) { return qubits - 1 - bit; };

    std::vector<Gate> gates;
    std::vector<double> cur(dim);
    for (Index x = 0; x < dim; ++x) cur[x] = std::arg(select_diag[x]);

    // Peel one qubit per pass: an Rz multiplexed over the remaining high
    // bits realizes the odd/even phase difference; the mean recurses.
    for (int bit = 0; bit < qubits; ++bit) {
        const std::size_t half = cur.size() / 2;
        std::vector<double> lambda(half), mean(half);
        for (std::size_t xh = 0; xh < half; ++xh) {
            lambda[xh] = cur[2 * xh + 1] - cur[2 * xh];
            mean[xh] = 0.5 * (cur[2 * xh + 1] + cur[2 * xh]);
        }
        std::vector<int> controls;
        for (int b = bit + 1; b < qubits; ++b) controls.push_back(qubit_of(b));
        emit_ucrz(gates, qubit_of(bit), controls, lambda);
        cur = std::move(mean);
    }

    // The leftover scalar in cur[0] is a global phase and is elided. For
    // the select diagonals built here it vanishes anyway: the entries come
    // in conjugate pairs, so the mean phase is zero.

    std::size_t before = gates.size() + 1;
    while (gates.size() < before) {
        before = gates.size();
        cancel_pass(gates, elide_angle_below);
    }

    DilationCircuit circuit;
    circuit.qubits = qubits;
    circuit.gates = std::move(gates);
    return circuit;
}

}  // namespace emq
