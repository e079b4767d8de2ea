#include "emq/evolution.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace emq {

std::string to_string(Method m) {
    switch (m) {
        case Method::Kraus: return "kraus";
        case Method::Lcu: return "lcu";
        case Method::Exact: return "exact";
        case Method::LosslessExact: return "lossless-exact";
    }
    return "?";
}

Matrix exact_propagator(const GeneratorPair& gen, double t) {
    const Index d = gen.layout.d;
    if (d > 4096) throw DimensionTooLarge("dense propagator is capped at d = 4096");
    Matrix a = Matrix(gen.d0) * Complex(0.0, -t);
    a -= (t * gen.ddiss).cast<Complex>().asDiagonal();
    return a.exp();
}

Matrix lossless_step_operator(const GeneratorPair& gen, double dt) {
    const Index d = gen.layout.d;
    if (d > 4096) throw DimensionTooLarge("dense step operator is capped at d = 4096");
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(gen.d0));
    Vector phases(d);
    for (Index k = 0; k < d; ++k) phases[k] = std::polar(1.0, -dt * es.eigenvalues()[k]);
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ProbabilityBounds probability_bounds(const StateVector& psi0, const GeneratorPair& gen,
                                     double dt) {
    if (dt < 0.0) throw NegativeTimeStep("dt must be >= 0");
    const StateLayout& layout = gen.layout;
    ProbabilityBounds b;
    if (layout.r == 0) return b;

    const Index off = layout.diss_offset();
    b.dissipative_weight =
        psi0.amplitudes.segment(off, layout.r).squaredNorm() / psi0.amplitudes.squaredNorm();
    b.gamma_min = gen.ddiss[off];
    b.gamma_max = gen.ddiss[off];
    for (Index j = 1; j < layout.r; ++j) {
        b.gamma_min = std::min(b.gamma_min, gen.ddiss[off + j]);
        b.gamma_max = std::max(b.gamma_max, gen.ddiss[off + j]);
    }
    b.p0min = 1.0 + (std::exp(-2.0 * b.gamma_max * dt) - 1.0) * b.dissipative_weight;
    b.p0max = 1.0 + (std::exp(-2.0 * b.gamma_min * dt) - 1.0) * b.dissipative_weight;
    return b;
}

double optimal_dt(double gamma_min, double gamma_max, double fraction) {
    if (gamma_min <= 0.0 || gamma_max < gamma_min)
        throw NonPositiveRate("rates must satisfy 0 < gamma_min <= gamma_max");
    if (gamma_min == gamma_max) {
        if (fraction <= 0.0 || fraction >= 1.0)
            throw ValidationError("fraction must lie in (0, 1)");
        return fraction / (2.0 * gamma_min);
    }
    return std::log(gamma_min / gamma_max) / (2.0 * (gamma_min - gamma_max));
}

ErrorEstimate error_estimate(const EvolutionPlan& plan, double gamma_min, double gamma_max,
                             const GeneratorPair* gen) {
    if (gamma_min <= 0.0 || gamma_max < gamma_min)
        throw NonPositiveRate("rates must satisfy 0 < gamma_min <= gamma_max");
    ErrorEstimate est;
    const double t_total = plan.t_total();
    if (gamma_min == gamma_max)
        est.analytic_bound = t_total / (2.0 * gamma_min);
    else
        est.analytic_bound =
            t_total * std::log(gamma_min / gamma_max) / (2.0 * (gamma_min - gamma_max));

    if (gen != nullptr && gen->layout.d <= 4096) {
        const Matrix u_exact = exact_propagator(*gen, t_total);
        const Matrix u0 = lossless_step_operator(*gen, plan.dt);
        const Matrix k0 = build_kraus_pair(*gen, plan.dt).k0_diag.cast<Complex>().asDiagonal();
        Matrix step = u0 * k0;
        Matrix trot = Matrix::Identity(gen->layout.d, gen->layout.d);
        for (Index k = 0; k < plan.steps; ++k) trot = step * trot;
        Eigen::JacobiSVD<Matrix> svd(u_exact - trot);
        est.measured_operator_norm = svd.singularValues()[0];
    }
    return est;
}

SimulationReport trotter_run(const StateVector& psi0, const EvolutionPlan& plan,
                             const GeneratorPair& gen, const GridSpec& grid,
                             const std::vector<MediumSpec>& media) {
    if (plan.steps < 1) throw ValidationError("plan needs at least one step");
    const bool stepped = plan.method == Method::Kraus || plan.method == Method::Lcu;
    if (stepped && plan.dt <= 0.0) throw ValidationError("stepped methods need dt > 0");

    const StateLayout& layout = gen.layout;
    if (psi0.amplitudes.size() != layout.d)
        throw DimensionMismatch("initial state does not match the generator dimension");

    SimulationReport report;
    StateVector psi = psi0;

    KrausPair pair;
    KrausDilation udiss;
    LcuCircuit lcu;
    DilationCircuit program;
    Matrix u0, exact_step;
    if (stepped) {
        pair = build_kraus_pair(gen, plan.dt);
        u0 = lossless_step_operator(gen, plan.dt);
        if (plan.method == Method::Kraus) {
            udiss = build_udiss_kraus(pair);
            if (plan.gate_level)
                program = synthesize_gates(decompose_two_level(udiss), layout.qubits + 1);
        } else {
            lcu = build_lcu_dilation(pair);
            program = lcu.program(plan.gate_level);
        }
        if (plan.gate_level) {
            const DilationCircuit& counted =
                (plan.method == Method::Kraus) ? program : lcu.synthesized;
            report.cnot_count = counted.cnot_count();
            report.rotation_count = counted.rotation_count();
        }
    } else {
        exact_step = (plan.method == Method::Exact) ? exact_propagator(gen, plan.dt)
                                                    : lossless_step_operator(gen, plan.dt);
    }

    double cum_p0 = 1.0;
    for (Index k = 0; k < plan.steps; ++k) {
        double p0 = 1.0;
        if (stepped) {
            DilatedState state = init_dilated(psi);
            if (plan.method == Method::Kraus && !plan.gate_level)
                udiss.apply(state.amplitudes);
            else
                apply_program(state, program);
            controlled_lossless_step(state, u0);
            const auto rec =
                measure_ancilla(state, plan.measure, plan.seed + static_cast<std::uint64_t>(k));
            if (rec.outcome != 0)
                throw ZeroProbabilityBranch("sampled ancilla outcome 1; trajectory aborted");
            p0 = rec.p0;
            psi.amplitudes = rec.post_state.amplitudes;
        } else {
            psi.amplitudes = exact_step * psi.amplitudes;
            p0 = psi.amplitudes.squaredNorm();
            psi.amplitudes /= std::sqrt(p0);
        }
        cum_p0 *= p0;
        psi.norm_scale *= p0;

        const Observables obs = observables(psi, layout, grid, media);
        StepRecord rec;
        rec.t = plan.dt * static_cast<double>(k + 1);
        rec.total_energy = obs.total_energy;
        rec.electric_energy = obs.electric_energy;
        rec.polarization_norm = obs.polarization.norm();
        rec.magnetization_norm = obs.magnetization.norm();
        rec.p0 = p0;
        rec.cumulative_p0 = cum_p0;
        report.steps.push_back(rec);
    }
    report.cumulative_p0 = cum_p0;

    if (stepped && layout.d <= 4096) {
        Vector exact = exact_propagator(gen, plan.t_total()) * psi0.amplitudes;
        const double nrm = exact.norm();
        if (nrm > 0.0) {
            exact /= nrm;
            report.final_fidelity = std::abs(exact.dot(psi.amplitudes));
            report.final_state_error = (exact - psi.amplitudes).norm();
        }
        // reference for the cumulative success probability
        const Matrix u0_ref = lossless_step_operator(gen, plan.dt);
        const Vector k0 = pair.k0_diag.cast<Complex>();
        Vector ref = psi0.amplitudes;
        for (Index k = 0; k < plan.steps; ++k) ref = u0_ref * (k0.array() * ref.array()).matrix();
        report.norm_check_error = std::abs(cum_p0 - ref.squaredNorm());
    }
    return report;
}

}  // namespace emq
