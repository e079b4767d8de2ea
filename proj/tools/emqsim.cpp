#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "emq/config.hpp"

namespace {

bool verbose() {
    const char* env = std::getenv("EMQSIM_LOG");
    return env != nullptr && std::string(env) != "0" && std::string(env) != "quiet";
}

void log_line(const std::string& msg) {
    if (verbose()) std::fprintf(stderr, "emqsim: %s\n", msg.c_str());
}

std::vector<double> parse_ladder(const std::string& spec) {
    std::vector<double> ladder;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t next = spec.find(',', pos);
        if (next == std::string::npos) next = spec.size();
        ladder.push_back(std::stod(spec.substr(pos, next - pos)));
        pos = next + 1;
    }
    return ladder;
}

int cmd_run(const std::string& config_path) {
    const emq::RunConfig config = emq::load_config(config_path);
    log_line("running " + emq::to_string(config.plan.method) + " scenario, " +
             std::to_string(config.plan.steps) + " steps");
    const emq::ScenarioResult result = emq::run_scenario(config);
    const auto& report = result.report;
    std::printf("steps          %zu\n", report.steps.size());
    std::printf("cumulative p0  %.17g\n", report.cumulative_p0);
    if (report.final_fidelity)
        std::printf("fidelity       %.17g\n", *report.final_fidelity);
    if (report.final_state_error)
        std::printf("state error    %.17g\n", *report.final_state_error);
    if (report.norm_check_error)
        std::printf("norm check     %.17g\n", *report.norm_check_error);
    if (config.plan.gate_level) {
        std::printf("cnot count     %zu\n", report.cnot_count);
        std::printf("rotation count %zu\n", report.rotation_count);
    }
    for (const auto& f : result.failures) std::printf("FAIL %s\n", f.c_str());
    return result.exit_code;
}

int cmd_verify(const std::string& config_path) {
    const emq::RunConfig config = emq::load_config(config_path);
    const auto failures = emq::verify_scenario(config);
    if (failures.empty()) {
        std::printf("all invariants hold\n");
        return 0;
    }
    for (const auto& f : failures) std::printf("FAIL %s\n", f.c_str());
    return 1;
}

int cmd_sweep(const std::string& config_path, const std::string& ladder_spec) {
    const emq::RunConfig config = emq::load_config(config_path);
    const std::vector<double> ladder = parse_ladder(ladder_spec);
    const emq::SweepTable table = emq::sweep_convergence(config, ladder);
    std::printf("dt\tmeasured_error\tanalytic_bound\n");
    for (const auto& row : table.rows)
        std::printf("%.17g\t%.17g\t%.17g\n", row.dt, row.measured_error, row.analytic_bound);
    std::printf("slope %.17g\n", table.slope);
    return 0;
}

int cmd_resources(const std::string& config_path, const std::string& range_spec) {
    const std::size_t sep = range_spec.find("..");
    if (sep == std::string::npos)
        throw emq::ValidationError("--n-range expects the form lo..hi");
    const int n_lo = std::stoi(range_spec.substr(0, sep));
    const int n_hi = std::stoi(range_spec.substr(sep + 2));
    const emq::RunConfig config = emq::load_config(config_path);
    const auto rows = emq::resource_report(config, n_lo, n_hi);
    std::printf("n\tmethod\tcnot\trotations\tlcu_below_kraus\n");
    for (const auto& row : rows)
        std::printf("%d\t%s\t%zu\t%zu\t%s\n", row.n, row.method.c_str(), row.cnot_count,
                    row.rotation_count, row.lcu_below_kraus ? "yes" : "-");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dissipative Maxwell quantum-circuit simulator"};
    app.require_subcommand(1);

    std::string config_path, ladder_spec = "0.04,0.02,0.01", range_spec = "3..7";

    auto* run = app.add_subcommand("run", "evolve a configured scenario");
    run->add_option("config", config_path, "JSON scenario file")->required();

    auto* verify = app.add_subcommand("verify", "check structural invariants");
    verify->add_option("config", config_path, "JSON scenario file")->required();

    auto* sweep = app.add_subcommand("sweep", "time-step convergence sweep");
    sweep->add_option("config", config_path, "JSON scenario file")->required();
    sweep->add_option("--dt-ladder", ladder_spec, "comma-separated dt values");

    auto* resources = app.add_subcommand("resources", "gate counts across register sizes");
    resources->add_option("config", config_path, "JSON scenario file")->required();
    resources->add_option("--n-range", range_spec, "qubit range lo..hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path);
        if (verify->parsed()) return cmd_verify(config_path);
        if (sweep->parsed()) return cmd_sweep(config_path, ladder_spec);
        if (resources->parsed()) return cmd_resources(config_path, range_spec);
    } catch (const emq::ParseError& e) {
        std::fprintf(stderr, "emqsim: %s\n", e.what());
        return 2;
    } catch (const emq::SchemaError& e) {
        std::fprintf(stderr, "emqsim: %s\n", e.what());
        return 2;
    } catch (const emq::ValidationError& e) {
        std::fprintf(stderr, "emqsim: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "emqsim: %s\n", e.what());
        return 1;
    }
    return 2;
}
