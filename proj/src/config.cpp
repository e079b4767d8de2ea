#include "emq/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace emq {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw SchemaError(path + "." + key + ": missing");
    return j.at(key);
}

double require_number(const json& j, const std::string& key, const std::string& path) {
    const json& v = require(j, key, path);
    if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number");
    return v.get<double>();
}

LorentzPole parse_pole(const json& j, const std::string& path) {
    LorentzPole p;
    p.coupling = require_number(j, "coupling", path);
    p.resonance = require_number(j, "resonance", path);
    p.damping = require_number(j, "damping", path);
    return p;
}

std::vector<LorentzPole> parse_poles(const json& j, const std::string& key,
                                     const std::string& path) {
    std::vector<LorentzPole> poles;
    if (!j.contains(key)) return poles;
    const json& arr = j.at(key);
    if (!arr.is_array()) throw SchemaError(path + "." + key + ": expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i)
        poles.push_back(parse_pole(arr[i], path + "." + key + "[" + std::to_string(i) + "]"));
    return poles;
}

FieldInit parse_field(const json& j, const std::string& path) {
    FieldInit f;
    if (j.is_array()) {
        f.values = j.get<std::vector<double>>();
    } else if (j.is_object() && j.contains("gaussian")) {
        const json& g = j.at("gaussian");
        GaussianProfile prof;
        prof.center = require_number(g, "center", path + ".gaussian");
        prof.width = require_number(g, "width", path + ".gaussian");
        prof.amplitude = g.value("amplitude", 1.0);
        if (prof.width <= 0.0) throw ValidationError(path + ".gaussian.width: must be > 0");
        f.gaussian = prof;
    } else {
        throw SchemaError(path + ": expected an array or a gaussian profile");
    }
    return f;
}

Method parse_method(const std::string& name, const std::string& path) {
    if (name == "kraus") return Method::Kraus;
    if (name == "lcu") return Method::Lcu;
    if (name == "exact") return Method::Exact;
    if (name == "lossless-exact") return Method::LosslessExact;
    throw SchemaError(path + ": unknown method '" + name + "'");
}

}  // namespace

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, /*allow comments*/ true);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config parse error: ") + e.what());
    }

    RunConfig cfg;
    const json& grid = require(j, "grid", "$");
    cfg.grid.cells = static_cast<Index>(require_number(grid, "cells", "$.grid"));
    cfg.grid.spacing = require_number(grid, "spacing", "$.grid");
    if (cfg.grid.cells < 2) throw ValidationError("$.grid.cells: need at least 2 cells");
    if (cfg.grid.spacing <= 0.0) throw ValidationError("$.grid.spacing: must be > 0");

    const json& media = require(j, "media", "$");
    if (!media.is_array() || media.empty())
        throw SchemaError("$.media: expected a non-empty array");
    for (std::size_t i = 0; i < media.size(); ++i) {
        const std::string path_i = "$.media[" + std::to_string(i) + "]";
        const json& m = media[i];
        MediumRegion region;
        const json& cells = require(m, "cells", path_i);
        if (!cells.is_array() || cells.size() != 2)
            throw SchemaError(path_i + ".cells: expected [begin, end)");
        region.begin = cells[0].get<Index>();
        region.end = cells[1].get<Index>();
        region.medium.eps0 = m.value("eps0", 1.0);
        region.medium.mu0 = m.value("mu0", 1.0);
        region.medium.electric_poles = parse_poles(m, "electric_poles", path_i);
        region.medium.magnetic_poles = parse_poles(m, "magnetic_poles", path_i);
        validate_medium(region.medium);
        cfg.regions.push_back(std::move(region));
    }
    std::sort(cfg.regions.begin(), cfg.regions.end(),
              [](const MediumRegion& a, const MediumRegion& b) { return a.begin < b.begin; });
    Index cursor = 0;
    for (std::size_t i = 0; i < cfg.regions.size(); ++i) {
        const auto& reg = cfg.regions[i];
        if (reg.begin != cursor)
            throw ValidationError("$.media: regions must tile [0, cells) but cell " +
                                  std::to_string(cursor) + " is covered " +
                                  (reg.begin < cursor ? "twice (overlap at region " +
                                   std::to_string(i) + ")" : "by no region"));
        if (reg.end <= reg.begin)
            throw ValidationError("$.media[" + std::to_string(i) + "].cells: empty range");
        cursor = reg.end;
    }
    if (cursor != cfg.grid.cells)
        throw ValidationError("$.media: regions cover [0, " + std::to_string(cursor) +
                              ") but the grid has " + std::to_string(cfg.grid.cells) + " cells");

    const json& initial = require(j, "initial", "$");
    cfg.initial_e = parse_field(require(initial, "E", "$.initial"), "$.initial.E");
    if (initial.contains("H"))
        cfg.initial_h = parse_field(initial.at("H"), "$.initial.H");

    const json& plan = require(j, "plan", "$");
    const json& dt = require(plan, "dt", "$.plan");
    if (dt.is_string() && dt.get<std::string>() == "auto") {
        cfg.dt_auto = true;
    } else if (dt.is_number()) {
        cfg.plan.dt = dt.get<double>();
    } else {
        throw SchemaError("$.plan.dt: expected a number or \"auto\"");
    }
    cfg.plan.steps = static_cast<Index>(require_number(plan, "steps", "$.plan"));
    if (cfg.plan.steps < 1) throw ValidationError("$.plan.steps: need at least 1");
    const json& method = require(plan, "method", "$.plan");
    if (!method.is_string()) throw SchemaError("$.plan.method: expected a string");
    cfg.plan.method = parse_method(method.get<std::string>(), "$.plan.method");
    cfg.plan.gate_level = plan.value("gate_level", false);
    cfg.dt_fraction = plan.value("dt_fraction", 0.1);
    if (plan.contains("seed")) {
        cfg.plan.measure = MeasureMode::Sample;
        cfg.plan.seed = plan.at("seed").get<std::uint64_t>();
    }

    if (j.contains("outputs")) {
        const json& out = j.at("outputs");
        cfg.outputs.report_path = out.value("report", "");
        cfg.outputs.steps_path = out.value("steps", "");
        cfg.outputs.circuit_path = out.value("circuit", "");
    }
    return cfg;
}

std::vector<MediumSpec> media_per_cell(const RunConfig& config) {
    std::vector<MediumSpec> media(config.grid.cells);
    for (const auto& region : config.regions)
        for (Index q = region.begin; q < region.end; ++q) media[q] = region.medium;
    return media;
}

Eigen::VectorXd realize_field(const FieldInit& init, const GridSpec& grid) {
    Eigen::VectorXd field = Eigen::VectorXd::Zero(grid.cells);
    if (init.values) {
        if (static_cast<Index>(init.values->size()) != grid.cells)
            throw ValidationError("inline field array length does not match the grid");
        for (Index q = 0; q < grid.cells; ++q) field[q] = (*init.values)[q];
    } else if (init.gaussian) {
        const auto& g = *init.gaussian;
        for (Index q = 0; q < grid.cells; ++q) {
            const double x = (static_cast<double>(q) + 0.5) * grid.spacing;
            const double u = (x - g.center) / g.width;
            field[q] = g.amplitude * std::exp(-0.5 * u * u);
        }
    }
    return field;
}

namespace {

struct RateRange {
    double min = 0.0;
    double max = 0.0;
    bool any = false;
};

RateRange dissipative_rates(const GeneratorPair& gen) {
    RateRange r;
    const Index off = gen.layout.diss_offset();
    for (Index j = 0; j < gen.layout.r; ++j) {
        const double g = gen.ddiss[off + j];
        if (!r.any) {
            r.min = r.max = g;
            r.any = true;
        } else {
            r.min = std::min(r.min, g);
            r.max = std::max(r.max, g);
        }
    }
    return r;
}

}  // namespace

void resolve_auto_dt(RunConfig& config, const GeneratorPair& gen) {
    if (!config.dt_auto) return;
    const RateRange rates = dissipative_rates(gen);
    if (!rates.any || rates.min <= 0.0)
        throw ValidationError("$.plan.dt: \"auto\" needs strictly positive damping everywhere");
    config.plan.dt = optimal_dt(rates.min, rates.max, config.dt_fraction);
    config.dt_auto = false;
}

ScenarioResult run_scenario(const RunConfig& config_in) {
    RunConfig config = config_in;
    const auto media = media_per_cell(config);
    const StateLayout layout = build_layout(config.grid, media.front());
    const GeneratorPair gen = build_generators(layout, config.grid, media);
    resolve_auto_dt(config, gen);

    const Eigen::VectorXd e0 = realize_field(config.initial_e, config.grid);
    const Eigen::VectorXd h0 = realize_field(config.initial_h, config.grid);
    const StateVector psi0 = encode_initial_state(e0, h0, layout, config.grid, media.front());

    ScenarioResult result;
    result.report = trotter_run(psi0, config.plan, gen, config.grid, media);

    // energy laws
    const bool lossless = dissipative_rates(gen).max == 0.0;
    const double e_total0 = 0.5 * psi0.norm_scale;
    double prev_cum = 1.0;
    for (const auto& step : result.report.steps) {
        if (lossless) {
            if (std::abs(step.total_energy / e_total0 - 1.0) > 1e-9)
                result.failures.push_back("lossless energy drift at t=" + fmt17(step.t));
            if (std::abs(step.p0 - 1.0) > 1e-12)
                result.failures.push_back("lossless p0 != 1 at t=" + fmt17(step.t));
        } else {
            if (step.electric_energy > e_total0 * (1.0 + 1e-12))
                result.failures.push_back("E_el exceeds initial E_total at t=" + fmt17(step.t));
        }
        if (step.cumulative_p0 > prev_cum * (1.0 + 1e-12))
            result.failures.push_back("cumulative p0 increased at t=" + fmt17(step.t));
        prev_cum = step.cumulative_p0;
    }

    if (!config.outputs.steps_path.empty())
        write_text_atomic(config.outputs.steps_path, render_steps_table(result.report));
    if (!config.outputs.circuit_path.empty() && config.plan.gate_level) {
        const KrausPair pair = build_kraus_pair(gen, config.plan.dt);
        DilationCircuit program;
        if (config.plan.method == Method::Kraus)
            program = synthesize_gates(decompose_two_level(build_udiss_kraus(pair)),
                                       layout.qubits + 1);
        else
            program = build_lcu_dilation(pair).program(true);
        write_text_atomic(config.outputs.circuit_path, export_circuit(program));
    }
    result.exit_code = result.failures.empty() ? 0 : 1;
    if (!config.outputs.report_path.empty())
        write_text_atomic(config.outputs.report_path, render_summary_json(config, result));
    return result;
}

std::vector<std::string> verify_scenario(const RunConfig& config_in) {
    RunConfig config = config_in;
    std::vector<std::string> failures;
    const auto media = media_per_cell(config);
    const StateLayout layout = build_layout(config.grid, media.front());
    const GeneratorPair gen = build_generators(layout, config.grid, media);
    resolve_auto_dt(config, gen);

    const Matrix d0 = Matrix(gen.d0);
    const double scale = std::max(1e-300, d0.cwiseAbs().maxCoeff());
    if ((d0 - d0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        failures.push_back("D0 is not Hermitian");
    for (Index q = layout.d_physical; q < layout.d; ++q)
        if (d0.row(q).cwiseAbs().sum() != 0.0 || d0.col(q).cwiseAbs().sum() != 0.0 ||
            gen.ddiss[q] != 0.0)
            failures.push_back("padding coordinate " + std::to_string(q) + " is not inert");

    const double dt = config.dt_auto ? 0.1 : config.plan.dt;
    const KrausPair pair = build_kraus_pair(gen, dt);
    const Matrix k0 = pair.k0_diag.cast<Complex>().asDiagonal();
    const Matrix k1 = pair.k1_dense();
    const Matrix comp = k0.adjoint() * k0 + k1.adjoint() * k1;
    if ((comp - Matrix::Identity(layout.d, layout.d)).cwiseAbs().maxCoeff() > 1e-12)
        failures.push_back("Kraus completeness violated");

    if (2 * layout.d <= 512) {
        const Matrix u = build_udiss_kraus(pair).dense();
        if ((u.adjoint() * u - Matrix::Identity(2 * layout.d, 2 * layout.d))
                .cwiseAbs().maxCoeff() > 1e-12)
            failures.push_back("Kraus dilation is not unitary");
        if ((u.topLeftCorner(layout.d, layout.d) - k0).cwiseAbs().maxCoeff() > 1e-13)
            failures.push_back("Kraus dilation top-left block != K0");
        const Matrix lcu = build_lcu_dilation(pair).dense();
        if ((lcu.topLeftCorner(layout.d, layout.d) - k0).cwiseAbs().maxCoeff() > 1e-13)
            failures.push_back("LCU dilation top-left block != K0");
    }

    const Eigen::VectorXd e0 = realize_field(config.initial_e, config.grid);
    const Eigen::VectorXd h0 = realize_field(config.initial_h, config.grid);
    const StateVector psi0 = encode_initial_state(e0, h0, layout, config.grid, media.front());
    const ProbabilityBounds bounds = probability_bounds(psi0, gen, dt);
    const double p0 = (pair.k0_diag.array().square() *
                       psi0.amplitudes.array().abs2()).sum();
    if (p0 < bounds.p0min - 1e-12 || p0 > bounds.p0max + 1e-12)
        failures.push_back("p0 outside [p0min, p0max]");
    return failures;
}

SweepTable sweep_convergence(const RunConfig& config_in, const std::vector<double>& dt_ladder) {
    if (dt_ladder.size() < 2)
        throw ValidationError("dt ladder needs at least two points to fit a slope");
    RunConfig config = config_in;
    const auto media = media_per_cell(config);
    const StateLayout layout = build_layout(config.grid, media.front());
    if (layout.d > 4096) throw DimensionTooLarge("sweep needs the dense oracle in scale");
    const GeneratorPair gen = build_generators(layout, config.grid, media);
    resolve_auto_dt(config, gen);
    const double t_total = config.plan.t_total();
    const RateRange rates = dissipative_rates(gen);

    const Eigen::VectorXd e0 = realize_field(config.initial_e, config.grid);
    const Eigen::VectorXd h0 = realize_field(config.initial_h, config.grid);
    const StateVector psi0 = encode_initial_state(e0, h0, layout, config.grid, media.front());

    SweepTable table;
    for (double dt : dt_ladder) {
        EvolutionPlan plan = config.plan;
        plan.dt = dt;
        plan.steps = std::max<Index>(1, static_cast<Index>(std::llround(t_total / dt)));
        const SimulationReport report = trotter_run(psi0, plan, gen, config.grid, media);
        SweepRow row;
        row.dt = dt;
        row.measured_error = report.final_state_error.value_or(0.0);
        row.analytic_bound = t_total * dt * rates.max;  // first-order Trotter scale
        table.rows.push_back(row);
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (const auto& row : table.rows) {
        if (row.measured_error <= 0.0) continue;
        const double x = std::log(row.dt), y = std::log(row.measured_error);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        const double n = static_cast<double>(count);
        table.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return table;
}

std::vector<ResourceRow> resource_report(const RunConfig& config, int n_lo, int n_hi) {
    if (n_lo < 3 || n_hi < n_lo) throw ValidationError("need 3 <= n_lo <= n_hi");
    if (n_hi + 1 > 12) throw ValidationError("structured counting is capped at n+1 = 12");

    const MediumSpec base = config.regions.front().medium;
    std::vector<ResourceRow> rows;
    const double dt = config.plan.dt > 0.0 ? config.plan.dt : 0.1;

    for (int n = n_lo; n <= n_hi; ++n) {
        if (base.electric_poles.empty() && base.magnetic_poles.empty()) {
            rows.push_back({n, "kraus", 0, 0, false});
            rows.push_back({n, "lcu", 0, 0, false});
            continue;
        }
        // components per cell from a probe layout
        const StateLayout probe = build_layout({2, config.grid.spacing}, base);
        const Index per_cell = probe.d_physical / 2;
        const Index nx = std::max<Index>(2, (Index{1} << n) / per_cell);

        GridSpec grid{nx, config.grid.spacing};
        std::vector<MediumSpec> media(nx, base);
        // grade the damping so the rotation angles are non-degenerate
        for (Index q = 0; q < nx; ++q) {
            const double f = 1.0 + 0.5 * static_cast<double>(q) / static_cast<double>(nx);
            for (auto& p : media[q].electric_poles) p.damping *= f;
            for (auto& p : media[q].magnetic_poles) p.damping *= f;
        }
        const StateLayout layout = build_layout(grid, base);
        const GeneratorPair gen = build_generators(layout, grid, media);
        const KrausPair pair = build_kraus_pair(gen, dt);

        const DilationCircuit kraus_circuit =
            synthesize_gates(decompose_two_level(build_udiss_kraus(pair)), layout.qubits + 1);
        const LcuCircuit lcu = build_lcu_dilation(pair);

        ResourceRow kr{layout.qubits, "kraus", kraus_circuit.cnot_count(),
                       kraus_circuit.rotation_count(), false};
        ResourceRow lc{layout.qubits, "lcu", lcu.synthesized.cnot_count(),
                       lcu.synthesized.rotation_count(), false};
        if (layout.qubits >= 5)
            lc.lcu_below_kraus = (lc.cnot_count + lc.rotation_count) <
                                 (kr.cnot_count + kr.rotation_count);
        rows.push_back(kr);
        rows.push_back(lc);
    }
    return rows;
}

double log_fit_r2(const std::vector<double>& model, const std::vector<double>& counts) {
    const std::size_t n = counts.size();
    std::vector<double> resid(n);
    double mean_resid = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        resid[i] = std::log(counts[i]) - std::log(model[i]);
        mean_resid += resid[i];
        mean_y += std::log(counts[i]);
    }
    mean_resid /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ss_res += (resid[i] - mean_resid) * (resid[i] - mean_resid);
        const double dy = std::log(counts[i]) - mean_y;
        ss_tot += dy * dy;
    }
    return 1.0 - ss_res / ss_tot;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

std::string render_steps_table(const SimulationReport& report) {
    std::ostringstream out;
    out << "t\tE_total\tE_el\tP_norm\tM_norm\tp0\tcum_p0\n";
    for (const auto& s : report.steps)
        out << fmt17(s.t) << "\t" << fmt17(s.total_energy) << "\t" << fmt17(s.electric_energy)
            << "\t" << fmt17(s.polarization_norm) << "\t" << fmt17(s.magnetization_norm) << "\t"
            << fmt17(s.p0) << "\t" << fmt17(s.cumulative_p0) << "\n";
    return out.str();
}

std::string render_summary_json(const RunConfig& config, const ScenarioResult& result) {
    json j;
    j["method"] = to_string(config.plan.method);
    j["dt"] = config.plan.dt;
    j["steps"] = config.plan.steps;
    j["gate_level"] = config.plan.gate_level;
    j["cumulative_p0"] = result.report.cumulative_p0;
    j["cnot_count"] = result.report.cnot_count;
    j["rotation_count"] = result.report.rotation_count;
    if (result.report.final_fidelity) j["final_fidelity"] = *result.report.final_fidelity;
    if (result.report.final_state_error)
        j["final_state_error"] = *result.report.final_state_error;
    if (result.report.norm_check_error) j["norm_check_error"] = *result.report.norm_check_error;
    j["failures"] = result.failures;
    json steps = json::array();
    for (const auto& s : result.report.steps) {
        steps.push_back({{"t", s.t},
                         {"E_total", s.total_energy},
                         {"E_el", s.electric_energy},
                         {"P_norm", s.polarization_norm},
                         {"M_norm", s.magnetization_norm},
                         {"p0", s.p0},
                         {"cum_p0", s.cumulative_p0}});
    }
    j["per_step"] = std::move(steps);
    return j.dump(2) + "\n";
}

SimulationReport read_summary_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open report: " + path.string());
    json j = json::parse(in);
    SimulationReport report;
    report.cumulative_p0 = j.at("cumulative_p0").get<double>();
    report.cnot_count = j.at("cnot_count").get<std::size_t>();
    report.rotation_count = j.at("rotation_count").get<std::size_t>();
    if (j.contains("final_fidelity")) report.final_fidelity = j.at("final_fidelity").get<double>();
    if (j.contains("final_state_error"))
        report.final_state_error = j.at("final_state_error").get<double>();
    if (j.contains("norm_check_error"))
        report.norm_check_error = j.at("norm_check_error").get<double>();
    for (const auto& s : j.at("per_step")) {
        StepRecord rec;
        rec.t = s.at("t").get<double>();
        rec.total_energy = s.at("E_total").get<double>();
        rec.electric_energy = s.at("E_el").get<double>();
        rec.polarization_norm = s.at("P_norm").get<double>();
        rec.magnetization_norm = s.at("M_norm").get<double>();
        rec.p0 = s.at("p0").get<double>();
        rec.cumulative_p0 = s.at("cum_p0").get<double>();
        report.steps.push_back(rec);
    }
    return report;
}

}  // namespace emq
