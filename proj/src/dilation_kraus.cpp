#include "emq/dilation_kraus.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace emq {

Matrix KrausDilation::dense() const {
    Matrix u = Matrix::Identity(2 * d, 2 * d);
    for (Index j = 0; j < r; ++j) {
        const Index a = diss_offset + j;
        const Index b = d + j;
        const double c = gamma_diag[j];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        u(a, a) = c;
        u(a, b) = -s;
        u(b, a) = s;
        u(b, b) = c;
    }
    return u;
}

void KrausDilation::apply(Vector& amplitudes) const {
    if (amplitudes.size() != 2 * d)
        throw DimensionMismatch("state does not match the dilation dimension");
    for (Index j = 0; j < r; ++j) {
        const Index a = diss_offset + j;
        const Index b = d + j;
        const double c = gamma_diag[j];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const Complex u = amplitudes[a], v = amplitudes[b];
        amplitudes[a] = c * u - s * v;
        amplitudes[b] = s * u + c * v;
    }
}

KrausDilation build_udiss_kraus(const KrausPair& pair) {
    KrausDilation u;
    u.d = pair.d;
    u.diss_offset = pair.diss_offset;
    u.r = pair.r;
    u.gamma_diag = pair.gamma_diag;
    return u;
}

std::vector<TwoLevelRotation> decompose_two_level(const KrausDilation& u) {
    if (u.gamma_diag.size() != u.r || u.diss_offset + u.r > u.d)
        throw StructureViolation("dilation blocks exceed the coordinate range");
    std::vector<TwoLevelRotation> rotations;
    rotations.reserve(u.r);
    std::set<Index> used;
    for (Index j = 0; j < u.r; ++j) {
        const double g = u.gamma_diag[j];
        if (!(g > 0.0 && g <= 1.0))
            throw StructureViolation("diagonal entry outside (0, 1]");
        TwoLevelRotation rot;
        rot.coord_a = u.diss_offset + j;
        rot.coord_b = u.d + j;
        rot.angle = 2.0 * std::acos(std::min(1.0, g));
        if (!used.insert(rot.coord_a).second || !used.insert(rot.coord_b).second)
            throw StructureViolation("coordinate pairs are not disjoint");
        rotations.push_back(rot);
    }
    return rotations;
}

namespace {

constexpr double kQuarterTurn = M_PI / 4.0;

void emit_toffoli(DilationCircuit& c, int c1, int c2, int t) {
    c.push(Gate::h(t));
    c.push(Gate::cnot(c2, t));
    c.push(Gate::phase(t, -kQuarterTurn));
    c.push(Gate::cnot(c1, t));
    c.push(Gate::phase(t, kQuarterTurn));
    c.push(Gate::cnot(c2, t));
    c.push(Gate::phase(t, -kQuarterTurn));
    c.push(Gate::cnot(c1, t));
    c.push(Gate::phase(t, kQuarterTurn));
    c.push(Gate::phase(c2, kQuarterTurn));
    c.push(Gate::h(t));
    c.push(Gate::cnot(c1, c2));
    c.push(Gate::phase(c1, kQuarterTurn));
    c.push(Gate::phase(c2, -kQuarterTurn));
    c.push(Gate::cnot(c1, c2));
}

// Dirty-ancilla staircase: controls c[0..j-1], ancillas a[0..j-3], target t.
void emit_mcx_vchain(DilationCircuit& circuit, const std::vector<int>& c, int t,
                     const std::vector<int>& a) {
    const int j = static_cast<int>(c.size());
    auto half = [&] {
        emit_toffoli(circuit, c[j - 1], a[j - 3], t);
        for (int i = j - 3; i >= 1; --i) emit_toffoli(circuit, c[i + 1], a[i - 1], a[i]);
        emit_toffoli(circuit, c[0], c[1], a[0]);
        for (int i = 1; i <= j - 3; ++i) emit_toffoli(circuit, c[i + 1], a[i - 1], a[i]);
    };
    half();  // flips target, disturbs ancillas
    half();  // flips target again with restored inputs, restores ancillas
}

}  // namespace

void emit_mcx(DilationCircuit& circuit, const std::vector<int>& controls, int target,
              const std::vector<int>& borrowable) {
    const int j = static_cast<int>(controls.size());
    if (j == 0) {
        circuit.push(Gate::x(target));
        return;
    }
    if (j == 1) {
        circuit.push(Gate::cnot(controls[0], target));
        return;
    }
    if (j == 2) {
        emit_toffoli(circuit, controls[0], controls[1], target);
        return;
    }
    if (static_cast<int>(borrowable.size()) >= j - 2) {
        std::vector<int> anc(borrowable.begin(), borrowable.begin() + (j - 2));
        emit_mcx_vchain(circuit, controls, target, anc);
        return;
    }
    if (borrowable.empty())
        throw StructureViolation("multi-controlled X needs at least one borrowable qubit");

    // Split through one borrowed qubit; each half borrows the other half.
    const int f = borrowable.front();
    const int ja = (j + 1) / 2;
    std::vector<int> group_a(controls.begin(), controls.begin() + ja);
    std::vector<int> group_b(controls.begin() + ja, controls.end());
    std::vector<int> dirty_for_a = group_b;
    dirty_for_a.push_back(target);
    std::vector<int> controls_bf = group_b;
    controls_bf.push_back(f);
    for (int rep = 0; rep < 2; ++rep) {
        emit_mcx(circuit, group_a, f, dirty_for_a);
        emit_mcx(circuit, controls_bf, target, group_a);
    }
}

void emit_mcry(DilationCircuit& circuit, const std::vector<int>& controls, int target,
               double angle) {
    const int j = static_cast<int>(controls.size());
    if (j == 0) {
        circuit.push(Gate::ry(target, angle));
        return;
    }
    if (j == 1) {
        circuit.push(Gate::ry(target, 0.5 * angle));
        circuit.push(Gate::cnot(controls[0], target));
        circuit.push(Gate::ry(target, -0.5 * angle));
        circuit.push(Gate::cnot(controls[0], target));
        return;
    }

    std::vector<int> borrowable;
    for (int q = 0; q < circuit.qubits; ++q) {
        if (q == target) continue;
        if (std::find(controls.begin(), controls.end(), q) == controls.end())
            borrowable.push_back(q);
    }

    if (!borrowable.empty()) {
        // X-conjugation halves: C^k Ry(t) = Ry(t/2) C^kX Ry(-t/2) C^kX
        emit_mcx(circuit, controls, target, borrowable);
        circuit.push(Gate::ry(target, -0.5 * angle));
        emit_mcx(circuit, controls, target, borrowable);
        circuit.push(Gate::ry(target, 0.5 * angle));
        return;
    }

    // fully packed register: peel one control, which frees it for the rest
    const int ck = controls.back();
    std::vector<int> rest(controls.begin(), controls.end() - 1);
    emit_mcry(circuit, {ck}, target, 0.5 * angle);
    emit_mcx(circuit, rest, ck, {target});
    emit_mcry(circuit, {ck}, target, -0.5 * angle);
    emit_mcx(circuit, rest, ck, {target});
    emit_mcry(circuit, rest, target, 0.5 * angle);
}

DilationCircuit synthesize_gates(const std::vector<TwoLevelRotation>& rotations, int qubits,
                                 const SynthesisOptions& options) {
    DilationCircuit circuit;
    circuit.qubits = qubits;
    const Index dim = Index{1} << qubits;
    auto qubit_of = [&](int bit) { return qubits - 1 - bit; };

    for (const auto& rot : rotations) {
        if (rot.coord_a < 0 || rot.coord_b >= dim || rot.coord_a >= rot.coord_b)
            throw StructureViolation("rotation coordinates outside the register");
        if (std::abs(rot.angle) < options.elide_angle_below) continue;

        const Index diff = rot.coord_a ^ rot.coord_b;
        int pivot = 0;
        for (int b = 0; b < qubits; ++b)
            if (diff & (Index{1} << b)) pivot = b;

        // CNOT conjugation folds every differing bit onto the pivot.
        std::vector<Gate> relays;
        for (int b = 0; b < qubits; ++b)
            if (b != pivot && (diff & (Index{1} << b)))
                relays.push_back(Gate::cnot(qubit_of(pivot), qubit_of(b)));

        const bool a_pivot_set = (rot.coord_a >> pivot) & 1;
        Index a_image = rot.coord_a;
        if (a_pivot_set) a_image ^= diff & ~(Index{1} << pivot);

        std::vector<int> ctrl_qubits;
        std::vector<Gate> polarity;
        for (int b = 0; b < qubits; ++b) {
            if (b == pivot) continue;
            ctrl_qubits.push_back(qubit_of(b));
            if (!((a_image >> b) & 1)) polarity.push_back(Gate::x(qubit_of(b)));
        }
        const double angle = a_pivot_set ? -rot.angle : rot.angle;

        for (const auto& g : relays) circuit.push(g);
        for (const auto& g : polarity) circuit.push(g);
        if (options.expand_multi_controlled)
            emit_mcry(circuit, ctrl_qubits, qubit_of(pivot), angle);
        else
            circuit.push(Gate::mcry(ctrl_qubits, qubit_of(pivot), angle));
        for (const auto& g : polarity) circuit.push(g);
        for (auto it = relays.rbegin(); it != relays.rend(); ++it) circuit.push(*it);
    }
    return circuit;
}

}  // namespace emq
