#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "emq/config.hpp"

using namespace emq;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::trunc);
    out << text;
    return path;
}

const char* kBasicConfig = R"({
  "grid": {"cells": 4, "spacing": 0.5},
  "media": [
    {"cells": [0, 4], "electric_poles": [{"coupling": 1.3, "resonance": 1.8, "damping": 0.4}]}
  ],
  "initial": {"E": [1.0, 0.5, -0.5, -1.0], "H": [0.0, 0.2, 0.2, 0.0]},
  "plan": {"dt": 0.1, "steps": 10, "method": "kraus"}
})";

}  // namespace

TEST_CASE("config round-trip") {
    const fs::path path = write_temp("emq_basic.json", kBasicConfig);
    const RunConfig cfg = load_config(path);
    CHECK(cfg.grid.cells == 4);
    CHECK(cfg.grid.spacing == 0.5);
    REQUIRE(cfg.regions.size() == 1);
    CHECK(cfg.regions[0].medium.electric_poles[0].damping == 0.4);
    CHECK(cfg.plan.dt == 0.1);
    CHECK(cfg.plan.steps == 10);
    CHECK(cfg.plan.method == Method::Kraus);
    CHECK_FALSE(cfg.dt_auto);
    REQUIRE(cfg.initial_e.values.has_value());
    CHECK((*cfg.initial_e.values)[3] == -1.0);
}

TEST_CASE("config rejects malformed inputs") {
    CHECK_THROWS_AS(load_config("/nonexistent/emq.json"), ParseError);
    CHECK_THROWS_AS(load_config(write_temp("emq_bad.json", "{nope")), ParseError);

    CHECK_THROWS_AS(load_config(write_temp("emq_missing.json", R"({"grid": {"cells": 4}})")),
                    SchemaError);

    std::string overlap = kBasicConfig;
    overlap.replace(overlap.find("[0, 4]"), 6, "[0, 3]");
    CHECK_THROWS_AS(load_config(write_temp("emq_gap.json", overlap)), ValidationError);

    std::string bad_dt = kBasicConfig;
    bad_dt.replace(bad_dt.find("\"dt\": 0.1"), 9, "\"dt\": true");
    CHECK_THROWS_AS(load_config(write_temp("emq_dt.json", bad_dt)), SchemaError);

    std::string bad_method = kBasicConfig;
    bad_method.replace(bad_method.find("\"kraus\""), 7, "\"magic\"");
    CHECK_THROWS_AS(load_config(write_temp("emq_method.json", bad_method)), SchemaError);
}

TEST_CASE("gaussian field realization") {
    FieldInit init;
    init.gaussian = GaussianProfile{1.0, 0.5, 2.0};
    const Eigen::VectorXd f = realize_field(init, {4, 0.5});
    // cell centers at 0.25, 0.75, 1.25, 1.75
    CHECK(f[1] == doctest::Approx(2.0 * std::exp(-0.125)).epsilon(1e-14));
    CHECK(f[1] == f[2]);  // symmetric about the peak
    CHECK(f[0] == f[3]);

    FieldInit wrong;
    wrong.values = std::vector<double>{1.0, 2.0};
    CHECK_THROWS_AS(realize_field(wrong, {4, 0.5}), ValidationError);
}

TEST_CASE("auto dt resolution") {
    std::string auto_cfg = kBasicConfig;
    auto_cfg.replace(auto_cfg.find("\"dt\": 0.1"), 9, "\"dt\": \"auto\"");
    RunConfig cfg = load_config(write_temp("emq_auto.json", auto_cfg));
    CHECK(cfg.dt_auto);

    const auto media = media_per_cell(cfg);
    const StateLayout layout = build_layout(cfg.grid, media.front());
    const GeneratorPair gen = build_generators(layout, cfg.grid, media);
    resolve_auto_dt(cfg, gen);
    CHECK_FALSE(cfg.dt_auto);
    // homogeneous substituted rate 0.8: dt = fraction / (2 g)
    CHECK(cfg.plan.dt == doctest::Approx(0.1 / 1.6).epsilon(1e-14));
}

TEST_CASE("run scenario writes consistent reports") {
    RunConfig cfg = load_config(write_temp("emq_run.json", kBasicConfig));
    const fs::path report = fs::temp_directory_path() / "emq_report.json";
    const fs::path steps = fs::temp_directory_path() / "emq_steps.tsv";
    cfg.outputs.report_path = report.string();
    cfg.outputs.steps_path = steps.string();

    const ScenarioResult result = run_scenario(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.failures.empty());
    REQUIRE(fs::exists(report));
    REQUIRE(fs::exists(steps));

    const SimulationReport loaded = read_summary_json(report);
    REQUIRE(loaded.steps.size() == result.report.steps.size());
    CHECK(loaded.cumulative_p0 == result.report.cumulative_p0);  // bit-exact
    CHECK(loaded.cnot_count == result.report.cnot_count);
    for (std::size_t k = 0; k < loaded.steps.size(); ++k) {
        CHECK(loaded.steps[k].t == result.report.steps[k].t);
        CHECK(loaded.steps[k].total_energy == result.report.steps[k].total_energy);
        CHECK(loaded.steps[k].cumulative_p0 == result.report.steps[k].cumulative_p0);
    }

    std::ifstream tsv(steps);
    std::string header;
    std::getline(tsv, header);
    CHECK(header == "t\tE_total\tE_el\tP_norm\tM_norm\tp0\tcum_p0");
}

TEST_CASE("gate-level run exports a circuit") {
    RunConfig cfg = load_config(write_temp("emq_gates.json", kBasicConfig));
    cfg.plan.gate_level = true;
    cfg.plan.steps = 2;
    const fs::path circuit = fs::temp_directory_path() / "emq_circuit.txt";
    cfg.outputs.circuit_path = circuit.string();

    const ScenarioResult result = run_scenario(cfg);
    CHECK(result.exit_code == 0);
    CHECK(result.report.cnot_count > 0);
    std::ifstream in(circuit);
    std::string first;
    std::getline(in, first);
    CHECK(first == "qubits 5");
}

TEST_CASE("verification passes on a sound scenario") {
    const RunConfig cfg = load_config(write_temp("emq_verify.json", kBasicConfig));
    CHECK(verify_scenario(cfg).empty());
}

TEST_CASE("sweep needs a ladder and fits a slope") {
    const RunConfig cfg = load_config(write_temp("emq_sweep.json", kBasicConfig));
    CHECK_THROWS_AS(sweep_convergence(cfg, {0.1}), ValidationError);
    const SweepTable table = sweep_convergence(cfg, {0.1, 0.05, 0.025});
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].measured_error > table.rows[2].measured_error);
    CHECK(table.slope > 0.5);
    CHECK(table.slope < 1.5);
}

TEST_CASE("resource report shapes") {
    const RunConfig cfg = load_config(write_temp("emq_res.json", kBasicConfig));
    const auto rows = resource_report(cfg, 4, 6);
    REQUIRE(rows.size() == 6);  // two methods per register size
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        CHECK(rows[i].method == "kraus");
        CHECK(rows[i + 1].method == "lcu");
        CHECK(rows[i].n == rows[i + 1].n);
        CHECK(rows[i].cnot_count + rows[i].rotation_count > 0);
    }
    CHECK_THROWS_AS(resource_report(cfg, 4, 13), ValidationError);
}

TEST_CASE("cli binary subcommands") {
    const fs::path exe = fs::current_path() / "emqsim";
    if (!fs::exists(exe)) return;  // run through ctest from the build tree

    const fs::path cfg = write_temp("emq_cli.json", kBasicConfig);
    const std::string base = "\"" + exe.string() + "\"";
    CHECK(std::system((base + " run " + cfg.string() + " > /dev/null").c_str()) == 0);
    CHECK(std::system((base + " verify " + cfg.string() + " > /dev/null").c_str()) == 0);

    const int usage = std::system((base + " frobnicate 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(usage) == 2);
    const int missing = std::system((base + " run /nonexistent.json 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(missing) == 2);
}
