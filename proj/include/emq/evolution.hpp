#pragma once

#include <optional>

#include "emq/dilation_kraus.hpp"
#include "emq/dilation_lcu.hpp"

namespace emq {

enum class Method { Kraus, Lcu, Exact, LosslessExact };

std::string to_string(Method m);

struct EvolutionPlan {
    double dt = 0.0;
    Index steps = 0;
    Method method = Method::Kraus;
    bool gate_level = false;
    MeasureMode measure = MeasureMode::PostSelectZero;
    std::uint64_t seed = 0;

    double t_total() const { return dt * static_cast<double>(steps); }
};

struct ProbabilityBounds {
    double p0min = 1.0;
    double p0max = 1.0;
    double gamma_min = 0.0;  // extrema of the substituted rates
    double gamma_max = 0.0;
    double dissipative_weight = 0.0;
};

struct StepRecord {
    double t = 0.0;
    double total_energy = 0.0;
    double electric_energy = 0.0;
    double polarization_norm = 0.0;
    double magnetization_norm = 0.0;
    double p0 = 1.0;
    double cumulative_p0 = 1.0;
};

struct SimulationReport {
    std::vector<StepRecord> steps;
    double cumulative_p0 = 1.0;
    std::optional<double> final_fidelity;      // vs the exact propagator
    std::optional<double> final_state_error;   // 2-norm, normalized states
    std::optional<double> norm_check_error;    // |cum p0 - ||(U0 K0)^Nt psi||^2|
    std::size_t cnot_count = 0;                // gate-level runs only
    std::size_t rotation_count = 0;
};

/// Dense e^{-i t (D0 - i Ddiss)} (scaling-and-squaring), d <= 4096.
Matrix exact_propagator(const GeneratorPair& gen, double t);

/// Unitary e^{-i dt D0} via Hermitian eigendecomposition; computed once per
/// dt and reused across steps.
Matrix lossless_step_operator(const GeneratorPair& gen, double dt);

SimulationReport trotter_run(const StateVector& psi0, const EvolutionPlan& plan,
                             const GeneratorPair& gen, const GridSpec& grid,
                             const std::vector<MediumSpec>& media);

ProbabilityBounds probability_bounds(const StateVector& psi0, const GeneratorPair& gen,
                                     double dt);

/// Closed-form maximizer of the bound gap when the rates differ; fraction of
/// the homogeneous decay time otherwise.
double optimal_dt(double gamma_min, double gamma_max, double fraction = 0.1);

struct ErrorEstimate {
    double analytic_bound = 0.0;
    std::optional<double> measured_operator_norm;
};

ErrorEstimate error_estimate(const EvolutionPlan& plan, double gamma_min, double gamma_max,
                             const GeneratorPair* gen = nullptr);

}  // namespace emq
