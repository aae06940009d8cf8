#pragma once

#include <cstdint>
#include <string>

#include "codasplr/simlab.hpp"

namespace codasplr {

// ---------------------------------------------------------------------------
// Command layer behind the coda-splr executable. Each command reads its
// inputs, computes, and writes a set of files into out_dir together with a
// metadata.json that echoes the tool version and the full configuration;
// re-running a command with the metadata's configuration reproduces every
// output byte for byte. When a command throws, files it already wrote are
// removed so no partial output is left behind.
// ---------------------------------------------------------------------------

struct PathsConfig {
    std::string input;
    bool id_column = false;
    std::string out_dir = "coda-splr-out";
    int k = 2;
    double beta = 1e-4;
    int grid = 51;
    std::uint64_t seed = 0;
    bool svg = false;
};

struct StepConfig {
    std::string input;
    bool id_column = false;
    std::string out_dir = "coda-splr-out";
    int max_ratios = 0;  ///< 0 means D - 1
};

struct SimulateConfig {
    std::string scenario = "A";
    int dim = 10;
    int n = 100;
    int runs = 100;
    std::uint64_t seed = 1;
    std::string rule = "strict";
    std::string out_dir = "coda-splr-out";
    int k = 2;
    double beta = 1e-4;
    int grid = 51;
    int jobs = 1;
    bool svg = false;
};

/// analyze = paths + step on the same dataset, plus a combined summary.
struct AnalyzeConfig {
    std::string input;
    bool id_column = false;
    std::string out_dir = "coda-splr-out";
    int k = 2;
    double beta = 1e-4;
    int grid = 51;
    std::uint64_t seed = 0;
    bool svg = false;
};

struct CommandOutcome {
    int nonconverged_fits = 0;  ///< > 0 maps to the warning exit code
    int failed_runs = 0;
};

/// Sweeps the alpha grid over a CSV composition and writes tradeoff.csv,
/// stability.csv, parts.csv, metadata.json, and (with svg) one SVG per table.
CommandOutcome cmd_paths(const PathsConfig& cfg);

/// Greedy forward selection; writes step.csv (rank, pair, cumulative exvar)
/// and metadata.json.
CommandOutcome cmd_step(const StepConfig& cfg);

/// Monte-Carlo study; writes runs.csv, fpr_fnr.csv, capture_curve.csv,
/// rank_difference.csv, aggregate.json, metadata.json, and optional SVGs of
/// the mean tradeoff and mean error-rate curves.
CommandOutcome cmd_simulate(const SimulateConfig& cfg);

/// Everything cmd_paths writes, plus step.csv and summary.json.
CommandOutcome cmd_analyze(const AnalyzeConfig& cfg);

ScenarioId parse_scenario(const std::string& name);
ImportanceRule parse_rule(const std::string& name);

}  // namespace codasplr
