#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "emq/dilation_kraus.hpp"

using namespace emq;

namespace {

KrausPair sample_pair(Index cells, double dt) {
    MediumSpec m;
    m.electric_poles.push_back({1.4, 2.2, 0.35});
    const GridSpec grid{cells, 0.5};
    const StateLayout layout = build_layout(grid, m);
    // grade the damping so every rotation angle is distinct
    std::vector<MediumSpec> media(cells, m);
    for (Index q = 0; q < cells; ++q)
        media[q].electric_poles[0].damping *= 1.0 + 0.3 * static_cast<double>(q);
    const GeneratorPair gen = build_generators(layout, grid, media);
    return build_kraus_pair(gen, dt);
}

Matrix mcx_reference(int qubits, const std::vector<int>& controls, int target) {
    const Index dim = Index{1} << qubits;
    auto bit = [&](int q) { return Index{1} << (qubits - 1 - q); };
    Index mask = 0;
    for (int c : controls) mask |= bit(c);
    Matrix u = Matrix::Zero(dim, dim);
    for (Index x = 0; x < dim; ++x) {
        const Index y = ((x & mask) == mask) ? (x ^ bit(target)) : x;
        u(y, x) = 1.0;
    }
    return u;
}

Matrix mcry_reference(int qubits, const std::vector<int>& controls, int target, double angle) {
    const Index dim = Index{1} << qubits;
    auto bit = [&](int q) { return Index{1} << (qubits - 1 - q); };
    Index mask = 0;
    for (int c : controls) mask |= bit(c);
    Matrix u = Matrix::Identity(dim, dim);
    const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
    for (Index x = 0; x < dim; ++x) {
        if ((x & bit(target)) || (x & mask) != mask) continue;
        const Index x1 = x | bit(target);
        u(x, x) = c;
        u(x, x1) = -s;
        u(x1, x) = s;
        u(x1, x1) = c;
    }
    return u;
}

}  // namespace

TEST_CASE("dilation is unitary with K0 in the top-left block") {
    const KrausPair pair = sample_pair(4, 0.45);
    const KrausDilation udiss = build_udiss_kraus(pair);
    const Matrix u = udiss.dense();
    const Index dim = 2 * pair.d;
    CHECK((u.adjoint() * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-13);
    const Matrix k0 = pair.k0_diag.cast<Complex>().asDiagonal();
    CHECK((u.topLeftCorner(pair.d, pair.d) - k0).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("implicit application matches the dense dilation") {
    const KrausPair pair = sample_pair(4, 0.45);
    const KrausDilation udiss = build_udiss_kraus(pair);

    std::mt19937_64 rng(17);
    std::normal_distribution<double> dist;
    Vector v(2 * pair.d);
    for (Index i = 0; i < v.size(); ++i) v[i] = Complex(dist(rng), dist(rng));
    v /= v.norm();

    Vector w = v;
    udiss.apply(w);
    CHECK((w - udiss.dense() * v).norm() < 1e-14);
}

TEST_CASE("two-level decomposition reproduces the dilation exactly") {
    const KrausPair pair = sample_pair(4, 0.6);
    const KrausDilation udiss = build_udiss_kraus(pair);
    const auto rotations = decompose_two_level(udiss);
    CHECK(static_cast<Index>(rotations.size()) == pair.r);

    const Index dim = 2 * pair.d;
    Matrix product = Matrix::Identity(dim, dim);
    for (const auto& rot : rotations) {
        Matrix g = Matrix::Identity(dim, dim);
        const double c = std::cos(0.5 * rot.angle), s = std::sin(0.5 * rot.angle);
        g(rot.coord_a, rot.coord_a) = c;
        g(rot.coord_a, rot.coord_b) = -s;
        g(rot.coord_b, rot.coord_a) = s;
        g(rot.coord_b, rot.coord_b) = c;
        product = g * product;
    }
    CHECK((product - udiss.dense()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("decomposition rejects malformed dilations") {
    KrausDilation bad;
    bad.d = 8;
    bad.diss_offset = 6;
    bad.r = 3;  // runs past the coordinate range
    bad.gamma_diag = Eigen::VectorXd::Constant(3, 0.5);
    CHECK_THROWS_AS(decompose_two_level(bad), StructureViolation);

    bad.r = 2;
    bad.gamma_diag = Eigen::VectorXd::Constant(2, 1.5);
    CHECK_THROWS_AS(decompose_two_level(bad), StructureViolation);
}

TEST_CASE("toffoli expansion is exactly CCX") {
    DilationCircuit c;
    c.qubits = 3;
    emit_mcx(c, {0, 1}, 2, {});
    const Matrix u = circuit_unitary(c);
    CHECK((u - mcx_reference(3, {0, 1}, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("multi-controlled X with dirty ancillas") {
    // staircase path: j - 2 borrowable qubits available
    for (int j = 3; j <= 5; ++j) {
        const int qubits = 2 * j - 1;
        std::vector<int> controls, borrowable;
        for (int q = 0; q < j; ++q) controls.push_back(q);
        for (int q = j + 1; q < qubits; ++q) borrowable.push_back(q);
        DilationCircuit c;
        c.qubits = qubits;
        emit_mcx(c, controls, j, borrowable);
        CHECK((circuit_unitary(c) - mcx_reference(qubits, controls, j)).cwiseAbs().maxCoeff()
              < 1e-12);
    }

    // split path: only one borrowable qubit
    for (int j = 4; j <= 6; ++j) {
        const int qubits = j + 2;
        std::vector<int> controls;
        for (int q = 0; q < j; ++q) controls.push_back(q);
        DilationCircuit c;
        c.qubits = qubits;
        emit_mcx(c, controls, j, {j + 1});
        CHECK((circuit_unitary(c) - mcx_reference(qubits, controls, j)).cwiseAbs().maxCoeff()
              < 1e-12);
    }

    DilationCircuit c;
    c.qubits = 4;
    CHECK_THROWS_AS(emit_mcx(c, {0, 1, 2}, 3, {}), StructureViolation);
}

TEST_CASE("multi-controlled Ry expansion") {
    for (int j = 1; j <= 4; ++j) {
        const int qubits = j + 1;
        std::vector<int> controls;
        for (int q = 0; q < j; ++q) controls.push_back(q);
        DilationCircuit c;
        c.qubits = qubits;
        emit_mcry(c, controls, j, 0.83);
        CHECK((circuit_unitary(c) - mcry_reference(qubits, controls, j, 0.83))
                  .cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("synthesized program reproduces the dilation") {
    const KrausPair pair = sample_pair(4, 0.5);  // d = 16, register of 5 qubits
    const KrausDilation udiss = build_udiss_kraus(pair);
    const auto rotations = decompose_two_level(udiss);

    const DilationCircuit circuit = synthesize_gates(rotations, 5);
    for (const auto& g : circuit.gates) {
        const bool elementary = g.kind == GateKind::X || g.kind == GateKind::H ||
                                g.kind == GateKind::RotY || g.kind == GateKind::RotZ ||
                                g.kind == GateKind::Phase || g.kind == GateKind::Cnot;
        CHECK(elementary);
    }
    CHECK(phase_insensitive_distance(circuit_unitary(circuit), udiss.dense()) < 1e-10);

    // pre-expansion form keeps the multi-controlled rotations structured
    SynthesisOptions opt;
    opt.expand_multi_controlled = false;
    const DilationCircuit compact = synthesize_gates(rotations, 5, opt);
    CHECK(phase_insensitive_distance(circuit_unitary(compact), udiss.dense()) < 1e-12);
}

TEST_CASE("single-bit pairs need no relay CNOTs") {
    // coordinates 2 and 6 differ only in the top bit: one multi-controlled
    // rotation with polarity flips, nothing else
    std::vector<TwoLevelRotation> rotations{{2, 6, 0.9}};
    SynthesisOptions opt;
    opt.expand_multi_controlled = false;
    const DilationCircuit circuit = synthesize_gates(rotations, 3, opt);
    CHECK(circuit.cnot_count() == 0);
    std::size_t mcry = 0;
    for (const auto& g : circuit.gates)
        if (g.kind == GateKind::MultiCtrlRotY) ++mcry;
    CHECK(mcry == 1);

    Matrix ref = Matrix::Identity(8, 8);
    const double c = std::cos(0.45), s = std::sin(0.45);
    ref(2, 2) = c; ref(2, 6) = -s; ref(6, 2) = s; ref(6, 6) = c;
    CHECK((circuit_unitary(circuit) - ref).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gate counts grow monotonically with the rotation count") {
    const KrausPair pair = sample_pair(4, 0.5);
    const KrausDilation udiss = build_udiss_kraus(pair);
    const auto rotations = decompose_two_level(udiss);
    std::size_t prev = 0;
    for (std::size_t r = 1; r <= rotations.size(); ++r) {
        std::vector<TwoLevelRotation> prefix(rotations.begin(), rotations.begin() + r);
        const DilationCircuit circuit = synthesize_gates(prefix, 5);
        const std::size_t total = circuit.cnot_count() + circuit.rotation_count();
        CHECK(total >= prev);
        prev = total;
    }
}

TEST_CASE("zero angles are elided") {
    std::vector<TwoLevelRotation> rotations{{3, 9, 0.0}};
    const DilationCircuit circuit = synthesize_gates(rotations, 4);
    CHECK(circuit.gates.empty());
}
