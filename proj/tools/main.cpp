// coda-splr: sparse logratio selection for compositional data.
//
// Subcommands:
//   paths     sparsity sweep over the pairwise-logratio expansion of a CSV
//   step      greedy forward logratio selection on the same input
//   simulate  Monte-Carlo study on synthetic scenarios with known truth
//   analyze   paths + step + a combined summary for one dataset
//
// Exit codes: 0 ok, 3 input parse error, 4 validation error, 5 I/O error,
// 6 finished with solver warnings (outputs are complete), 1 unexpected.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "codasplr/commands.hpp"
#include "codasplr/log.hpp"
#include "codasplr/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;
constexpr int kExitIo = 5;
constexpr int kExitSolverWarning = 6;

int exit_code_for(const codasplr::Error& e) {
    switch (e.kind()) {
        case codasplr::ErrorKind::ParseError:
            return kExitParse;
        case codasplr::ErrorKind::IoError:
            return kExitIo;
        default:
            return kExitValidation;
    }
}

int outcome_code(const codasplr::CommandOutcome& outcome) {
    if (outcome.failed_runs > 0 || outcome.nonconverged_fits > 0) return kExitSolverWarning;
    return kExitOk;
}

void add_input_flags(CLI::App* cmd, std::string& input, bool& id_column) {
    cmd->add_option("--input", input, "CSV of strictly positive compositions, one header row")
        ->required();
    cmd->add_flag("--id-col", id_column, "Treat the first column as row ids, not a part");
}

void add_spca_flags(CLI::App* cmd, int& k, double& beta, int& grid, std::uint64_t& seed) {
    cmd->add_option("--k", k, "Number of sparse components")->check(CLI::PositiveNumber);
    cmd->add_option("--beta", beta, "Ridge penalty on the loadings")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--grid", grid, "Number of sparsity levels to sweep")
        ->check(CLI::Range(2, 100000));
    cmd->add_option("--seed", seed, "Base seed recorded in the outputs");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse principal-component selection of pairwise logratios"};
    app.set_version_flag("--version", codasplr::kVersion);
    app.require_subcommand(1);

    codasplr::PathsConfig paths_cfg;
    CLI::App* paths = app.add_subcommand("paths", "Sweep sparsity levels and report stability");
    add_input_flags(paths, paths_cfg.input, paths_cfg.id_column);
    add_spca_flags(paths, paths_cfg.k, paths_cfg.beta, paths_cfg.grid, paths_cfg.seed);
    paths->add_option("--out", paths_cfg.out_dir, "Output directory");
    paths->add_flag("--svg", paths_cfg.svg, "Also render SVG charts");

    codasplr::StepConfig step_cfg;
    CLI::App* step = app.add_subcommand("step", "Greedy forward logratio selection");
    add_input_flags(step, step_cfg.input, step_cfg.id_column);
    step->add_option("--max-ratios", step_cfg.max_ratios,
                     "Number of ratios to select (0 means D - 1)")
        ->check(CLI::NonNegativeNumber);
    step->add_option("--out", step_cfg.out_dir, "Output directory");

    codasplr::SimulateConfig sim_cfg;
    CLI::App* sim = app.add_subcommand("simulate", "Monte-Carlo study on synthetic scenarios");
    sim->add_option("--scenario", sim_cfg.scenario, "Scenario id: A, B, or C");
    sim->add_option("--dim", sim_cfg.dim, "Number of parts (10 or 20)");
    sim->add_option("--n", sim_cfg.n, "Observations per run")->check(CLI::Range(2, 10000000));
    sim->add_option("--runs", sim_cfg.runs, "Number of Monte-Carlo runs")
        ->check(CLI::PositiveNumber);
    sim->add_option("--rule", sim_cfg.rule, "Ground-truth rule: strict or lax");
    sim->add_option("--jobs", sim_cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_spca_flags(sim, sim_cfg.k, sim_cfg.beta, sim_cfg.grid, sim_cfg.seed);
    sim->add_option("--out", sim_cfg.out_dir, "Output directory");
    sim->add_flag("--svg", sim_cfg.svg, "Also render SVG charts");

    codasplr::AnalyzeConfig analyze_cfg;
    CLI::App* analyze = app.add_subcommand("analyze", "Full report: paths, step, and summary");
    add_input_flags(analyze, analyze_cfg.input, analyze_cfg.id_column);
    add_spca_flags(analyze, analyze_cfg.k, analyze_cfg.beta, analyze_cfg.grid, analyze_cfg.seed);
    analyze->add_option("--out", analyze_cfg.out_dir, "Output directory");
    analyze->add_flag("--svg", analyze_cfg.svg, "Also render SVG charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        codasplr::CommandOutcome outcome;
        if (*paths) outcome = codasplr::cmd_paths(paths_cfg);
        if (*step) outcome = codasplr::cmd_step(step_cfg);
        if (*sim) outcome = codasplr::cmd_simulate(sim_cfg);
        if (*analyze) outcome = codasplr::cmd_analyze(analyze_cfg);
        return outcome_code(outcome);
    } catch (const codasplr::Error& e) {
        std::fprintf(stderr, "coda-splr: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "coda-splr: unexpected error: %s\n", e.what());
        return kExitUnexpected;
    }
}
