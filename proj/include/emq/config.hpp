#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emq/evolution.hpp"

namespace emq {

struct MediumRegion {
    Index begin = 0;  // cell range [begin, end)
    Index end = 0;
    MediumSpec medium;
};

struct GaussianProfile {
    double center = 0.0;     // m
    double width = 1.0;      // m
    double amplitude = 1.0;
};

struct FieldInit {
    std::optional<std::vector<double>> values;   // inline per-cell array
    std::optional<GaussianProfile> gaussian;
};

struct OutputSpec {
    std::string report_path;   // JSON summary
    std::string steps_path;    // per-step TSV table
    std::string circuit_path;  // gate listing, gate-level runs only
};

struct RunConfig {
    GridSpec grid;
    std::vector<MediumRegion> regions;
    FieldInit initial_e;
    FieldInit initial_h;
    EvolutionPlan plan;
    bool dt_auto = false;
    double dt_fraction = 0.1;  // dt fraction of 1/(2*gamma) for homogeneous rates
    OutputSpec outputs;
};

RunConfig load_config(const std::filesystem::path& path);

std::vector<MediumSpec> media_per_cell(const RunConfig& config);
Eigen::VectorXd realize_field(const FieldInit& init, const GridSpec& grid);

/// Fills plan.dt from the generator rates when dt = "auto" was configured.
void resolve_auto_dt(RunConfig& config, const GeneratorPair& gen);

struct ScenarioResult {
    SimulationReport report;
    std::vector<std::string> failures;  // violated self-checks
    int exit_code = 0;
};

ScenarioResult run_scenario(const RunConfig& config);

/// Runs the structural invariant suite (hermiticity, completeness,
/// unitarity, bound containment) for the configured scenario.
std::vector<std::string> verify_scenario(const RunConfig& config);

struct SweepRow {
    double dt = 0.0;
    double measured_error = 0.0;
    double analytic_bound = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double slope = 0.0;  // log-log fit of measured error vs dt
};

SweepTable sweep_convergence(const RunConfig& config, const std::vector<double>& dt_ladder);

struct ResourceRow {
    int n = 0;
    std::string method;
    std::size_t cnot_count = 0;
    std::size_t rotation_count = 0;
    bool lcu_below_kraus = false;  // filled on lcu rows for n >= 5
};

std::vector<ResourceRow> resource_report(const RunConfig& config, int n_lo, int n_hi);

/// R^2 of the one-parameter log-space fit count ~ c * model.
double log_fit_r2(const std::vector<double>& model, const std::vector<double>& counts);

void write_text_atomic(const std::filesystem::path& path, const std::string& text);
std::string render_steps_table(const SimulationReport& report);
std::string render_summary_json(const RunConfig& config, const ScenarioResult& result);
SimulationReport read_summary_json(const std::filesystem::path& path);

}  // namespace emq
