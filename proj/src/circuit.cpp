#include "emq/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace emq {

std::size_t DilationCircuit::cnot_count() const {
    std::size_t c = 0;
    for (const auto& g : gates)
        if (g.kind == GateKind::Cnot) ++c;
    return c;
}

std::size_t DilationCircuit::rotation_count() const {
    std::size_t c = 0;
    for (const auto& g : gates)
        if (g.kind == GateKind::X || g.kind == GateKind::H || g.kind == GateKind::RotY ||
            g.kind == GateKind::RotZ || g.kind == GateKind::Phase)
            ++c;
    return c;
}

std::string export_circuit(const DilationCircuit& circuit) {
    std::ostringstream out;
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out << "qubits " << circuit.qubits << "\n";
    for (const auto& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::X: out << "x " << g.target << "\n"; break;
            case GateKind::H: out << "h " << g.target << "\n"; break;
            case GateKind::RotY: out << "ry " << g.target << " " << fmt(g.angle) << "\n"; break;
            case GateKind::RotZ: out << "rz " << g.target << " " << fmt(g.angle) << "\n"; break;
            case GateKind::Phase: out << "p " << g.target << " " << fmt(g.angle) << "\n"; break;
            case GateKind::Cnot: out << "cnot " << g.control << " " << g.target << "\n"; break;
            default:
                throw StructureViolation("only elementary gates can be exported");
        }
    }
    return out.str();
}

DilatedState init_dilated(const StateVector& psi) {
    DilatedState state;
    const Index d = psi.amplitudes.size();
    state.amplitudes = Vector::Zero(2 * d);
    state.amplitudes.head(d) = psi.amplitudes;
    int m = 0;
    while ((Index{1} << m) < 2 * d) ++m;
    state.qubits = m;
    return state;
}

namespace {

inline Index bit_of(int qubits, int qubit) { return Index{1} << (qubits - 1 - qubit); }

template <typename F>
void for_each_pair(Index dim, Index tbit, F&& f) {
    for (Index x = 0; x < dim; ++x)
        if (!(x & tbit)) f(x, x | tbit);
}

}  // namespace

void apply_gate(Vector& a, int qubits, const Gate& g) {
    const Index dim = Index{1} << qubits;
    if (a.size() != dim) throw DimensionMismatch("amplitude vector does not match register width");

    switch (g.kind) {
        case GateKind::X: {
            const Index tb = bit_of(qubits, g.target);
            for_each_pair(dim, tb, [&](Index x0, Index x1) { std::swap(a[x0], a[x1]); });
            break;
        }
        case GateKind::H: {
            const Index tb = bit_of(qubits, g.target);
            const double s = 1.0 / std::sqrt(2.0);
            for_each_pair(dim, tb, [&](Index x0, Index x1) {
                const Complex u = a[x0], v = a[x1];
                a[x0] = s * (u + v);
                a[x1] = s * (u - v);
            });
            break;
        }
        case GateKind::RotY: {
            const Index tb = bit_of(qubits, g.target);
            const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
            for_each_pair(dim, tb, [&](Index x0, Index x1) {
                const Complex u = a[x0], v = a[x1];
                a[x0] = c * u - s * v;
                a[x1] = s * u + c * v;
            });
            break;
        }
        case GateKind::RotZ: {
            const Index tb = bit_of(qubits, g.target);
            const Complex e0 = std::polar(1.0, -0.5 * g.angle);
            const Complex e1 = std::polar(1.0, 0.5 * g.angle);
            for (Index x = 0; x < dim; ++x) a[x] *= (x & tb) ? e1 : e0;
            break;
        }
        case GateKind::Phase: {
            const Index tb = bit_of(qubits, g.target);
            const Complex e1 = std::polar(1.0, g.angle);
            for (Index x = 0; x < dim; ++x)
                if (x & tb) a[x] *= e1;
            break;
        }
        case GateKind::Cnot: {
            const Index cb = bit_of(qubits, g.control);
            const Index tb = bit_of(qubits, g.target);
            for (Index x = 0; x < dim; ++x)
                if ((x & cb) && !(x & tb)) std::swap(a[x], a[x | tb]);
            break;
        }
        case GateKind::MultiCtrlRotY: {
            const Index tb = bit_of(qubits, g.target);
            Index mask = 0;
            for (int c : g.controls) mask |= bit_of(qubits, c);
            const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
            for (Index x = 0; x < dim; ++x) {
                if ((x & tb) || (x & mask) != mask) continue;
                const Index x1 = x | tb;
                const Complex u = a[x], v = a[x1];
                a[x] = c * u - s * v;
                a[x1] = s * u + c * v;
            }
            break;
        }
        case GateKind::TwoLevel: {
            const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
            const Complex u = a[g.coord_a], v = a[g.coord_b];
            a[g.coord_a] = c * u - s * v;
            a[g.coord_b] = s * u + c * v;
            break;
        }
        case GateKind::Diagonal: {
            if (g.diag.size() != dim) throw DimensionMismatch("diagonal block size mismatch");
            a.array() *= g.diag.array();
            break;
        }
        case GateKind::Dense: {
            if (g.dense.rows() != dim) throw DimensionMismatch("dense block size mismatch");
            a = g.dense * a;
            break;
        }
    }
}

void apply_program(DilatedState& state, const DilationCircuit& circuit) {
    if (circuit.qubits != state.qubits)
        throw DimensionMismatch("circuit register width does not match the state");
    for (const auto& g : circuit.gates) apply_gate(state.amplitudes, state.qubits, g);
}

void controlled_lossless_step(DilatedState& state, const Matrix& u0) {
    const Index d = state.half();
    if (u0.rows() != d || u0.cols() != d)
        throw DimensionMismatch("lossless step operator does not match the state");
    const double res = (u0.adjoint() * u0 - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (res > 1e-12) throw NonUnitaryBlock("lossless step operator is not unitary");
    state.amplitudes.head(d) = u0 * state.amplitudes.head(d);
}

MeasurementRecord measure_ancilla(const DilatedState& state, MeasureMode mode,
                                  std::uint64_t seed) {
    const Index d = state.half();
    MeasurementRecord rec;
    rec.p0 = state.amplitudes.head(d).squaredNorm();

    int outcome = 0;
    if (mode == MeasureMode::Sample) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        outcome = (u(rng) < rec.p0) ? 0 : 1;
    } else if (rec.p0 < 1e-14) {
        throw ZeroProbabilityBranch("post-selection probability vanished");
    }
    rec.outcome = outcome;

    if (outcome == 0) {
        rec.post_state.amplitudes = state.amplitudes.head(d) / std::sqrt(rec.p0);
    } else {
        const double p1 = 1.0 - rec.p0;
        rec.post_state.amplitudes = state.amplitudes.tail(d) / std::sqrt(p1);
    }
    return rec;
}

Matrix circuit_unitary(const DilationCircuit& circuit) {
    const Index dim = Index{1} << circuit.qubits;
    Matrix u = Matrix::Identity(dim, dim);
    Vector col(dim);
    for (Index j = 0; j < dim; ++j) {
        col = u.col(j);
        for (const auto& g : circuit.gates) apply_gate(col, circuit.qubits, g);
        u.col(j) = col;
    }
    return u;
}

double phase_insensitive_distance(const Matrix& a, const Matrix& b) {
    Index pr = 0, pc = 0;
    b.cwiseAbs().maxCoeff(&pr, &pc);
    if (std::abs(b(pr, pc)) == 0.0) return a.cwiseAbs().maxCoeff();
    Complex phase = a(pr, pc) / b(pr, pc);
    const double mag = std::abs(phase);
    phase = (mag == 0.0) ? Complex(1.0, 0.0) : phase / mag;
    return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace emq
