#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "fpflow/config.hpp"
#include "fpflow/suites.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

void apply_overrides(fpflow::RunConfig& config, const std::string& out_dir,
                     std::int64_t seed, int threads) {
    if (const char* env = std::getenv("FPFLOW_OUT")) config.out_dir = env;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
    if (threads > 0) config.threads = threads;
}

void print_report(const fpflow::SuiteReport& report) {
    for (const auto& r : report.rows)
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << report.suite << "." << r.name
                  << "  value=" << r.value << "  threshold=" << r.threshold
                  << (r.note.empty() ? "" : "  (" + r.note + ")") << "\n";
    for (const auto& f : report.files_written) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled free-porous flow solver and verification harness"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite_name;
    std::int64_t seed = -1;
    int threads = 0;

    CLI::App* cmd_solve = app.add_subcommand("solve", "solve the configured problem");
    cmd_solve->add_option("--config", config_path, "configuration file")->required();
    cmd_solve->add_option("--out", out_dir, "output directory override");
    cmd_solve->add_option("--seed", seed, "random seed override");
    cmd_solve->add_option("--threads", threads, "assembly thread count");

    CLI::App* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    cmd_verify->add_option("--config", config_path, "configuration file")->required();
    cmd_verify
        ->add_option("--suite", suite_name,
                     "minpower | gradient | uniqueness | jump | channel | convergence")
        ->required();
    cmd_verify->add_option("--out", out_dir, "output directory override");
    cmd_verify->add_option("--seed", seed, "random seed override");
    cmd_verify->add_option("--threads", threads, "assembly thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    fpflow::RunConfig config;
    try {
        config = fpflow::parse_config_file(config_path);
        apply_overrides(config, out_dir, seed, threads);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (cmd_solve->parsed()) {
            fpflow::SolveOutputs out = fpflow::run_solve(config);
            std::cout << "residual_norm=" << out.solution.residual_norm
                      << " mass_residual=" << out.mass_residual
                      << " normal_jump_weighted=" << out.residuals.r1_weighted_max << "\n";
            std::cout << "power: phi_free=" << out.power.phi_free
                      << " phi_por=" << out.power.phi_por
                      << " psi_interface=" << out.power.psi_interface
                      << " external=" << out.power.external_work
                      << " total=" << out.power.total << "\n";
            for (const auto& f : out.files_written) std::cout << "wrote " << f << "\n";
            return out.residual_contract_ok() ? 0 : kExitSolverError;
        }
        const fpflow::SuiteReport report = fpflow::run_suite(suite_name, config);
        print_report(report);
        return report.all_pass() ? 0 : kExitVerifyFailed;
    } catch (const fpflow::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const fpflow::invalid_model_data& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const fpflow::solver_error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverError;
    }
}
