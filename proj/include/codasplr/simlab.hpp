#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "codasplr/coda.hpp"
#include "codasplr/stability.hpp"
#include "codasplr/step.hpp"

namespace codasplr {

// ---------------------------------------------------------------------------
// Monte-Carlo study: synthetic compositions with a small set of relevant
// balances (correlated signal) and the remaining balances filled with
// bounded uniform noise, back-transformed to the simplex. Recovery of the
// signal-bearing pairwise logratios is then scored against ground truth.
// ---------------------------------------------------------------------------

enum class ScenarioId { A, B, C };

enum class ImportanceRule {
    Strict,  ///< pair (i, j) important iff V row i equals V row j on every noise balance
    Lax,     ///< pair (i, j) important iff V rows i, j differ on at least one relevant balance
};

/// A fully specified generating model: an explicit partition for dimension
/// D in {10, 20}, the indices of the relevant (signal) and noise balances,
/// the equicorrelation of the signal block, and the noise half-width.
struct Scenario {
    ScenarioId id = ScenarioId::A;
    int D = 10;
    SbpSignMatrix sbp;
    std::vector<int> relevant;
    std::vector<int> noise;
    double rho = 0.7;
    double noise_bound = 2.0;
};

struct GroundTruth {
    std::vector<int> important;  ///< canonical PLR column ids, ascending
    ImportanceRule rule = ImportanceRule::Strict;
};

struct Rates {
    double fpr = 0.0;
    double fnr = 0.0;
    bool fpr_defined = true;  ///< false when FP + TN == 0 (rate reported as 0)
    bool fnr_defined = true;  ///< false when FN + TP == 0 (rate reported as 0)
};

/// One simulated dataset pushed through the full pipeline.
struct RunRecord {
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    double alpha_max = 0.0;
    std::vector<double> alpha;      ///< grid values of this run
    std::vector<double> fpr;        ///< per grid point
    std::vector<double> fnr;
    std::vector<double> pct_zero;
    std::vector<double> pct_exvar;
    std::vector<double> capture_spca;    ///< per t = 1..D-1
    std::vector<double> capture_step;
    std::vector<double> rankdiff_spca;
    std::vector<double> rankdiff_step;
    double dense_exvar = 0.0;
    int nonconverged_fits = 0;
};

struct BatchConfig {
    int n = 100;
    int runs = 100;
    std::uint64_t seed = 1;
    SpcaConfig spca;
    ImportanceRule rule = ImportanceRule::Strict;
    int grid_points = 51;
    int jobs = 1;  ///< worker threads across runs; aggregation stays run-ordered
};

/// Batch outcome: every per-run record plus aggregates averaged over the
/// successful runs in run order. Vector aggregates are indexed like their
/// per-run counterparts (grid index, or t - 1).
struct BatchResult {
    Scenario scenario;
    BatchConfig config;
    GroundTruth truth;
    std::vector<RunRecord> runs;
    std::vector<double> mean_alpha;
    std::vector<double> mean_fpr;
    std::vector<double> mean_fnr;
    std::vector<double> mean_pct_zero;
    std::vector<double> mean_pct_exvar;
    std::vector<double> mean_capture_spca;
    std::vector<double> mean_capture_step;
    std::vector<double> mean_rankdiff_spca;
    std::vector<double> mean_rankdiff_step;
    double mean_dense_exvar = 0.0;
    double sd_dense_exvar = 0.0;
    int failed_runs = 0;
    int nonconverged_fits = 0;
};

/// Returns the generating model for (id, D). Only D = 10 and D = 20 ship;
/// anything else throws UnsupportedDimension. The partitions are explicit
/// literal tables, not generated.
Scenario build_scenario(ScenarioId id, int D);

/// Draws n observations: relevant balances are jointly normal with unit
/// variance and pairwise correlation rho (via Cholesky), noise balances are
/// iid uniform on [-noise_bound, noise_bound], and rows are mapped through
/// balances_to_composition. Same seed, same build: identical output.
CompositionMatrix generate_dataset(const Scenario& sc, int n, std::uint64_t seed);

/// Ground-truth importance under the chosen rule, derived from the contrast
/// matrix rows of the scenario partition.
GroundTruth important_plrs(const Scenario& sc, ImportanceRule rule = ImportanceRule::Strict);

/// False positive rate FP / (FP + TN) and false negative rate FN / (FN + TP)
/// of a selected PLR set against the truth, over the universe of M pairs.
/// Empty denominators yield rate 0 with the matching defined flag cleared.
Rates fpr_fnr(const std::vector<int>& selected, const GroundTruth& truth, int M);

/// capture[t - 1] = 100 * |first t of ordered ∩ truth| / |truth| for
/// t = 1..|ordered|. Throws EmptyTruth.
std::vector<double> capture_curve(const std::vector<int>& ordered, const GroundTruth& truth);

/// Cumulative rank excess of a method ordering over the best achievable.
/// Every PLR gets an ideal rank by sorting variances descending (ties by
/// canonical order); entry t - 1 is the sum of the ideal ranks of the first
/// t ordered PLRs minus 1 + 2 + ... + t. Always nonnegative. Throws
/// LengthMismatch when ordered is longer than the variance vector or empty.
std::vector<double> rank_difference(const std::vector<int>& ordered,
                                    const Eigen::VectorXd& variances);

/// Runs the full study: per run, generate data, expand and center, sweep the
/// alpha grid, select with both methods, and score. Per-run seeds follow
/// kSeedDerivation; failed runs are recorded and excluded from aggregates.
BatchResult run_batch(const Scenario& sc, const BatchConfig& cfg);

const char* to_string(ScenarioId id);
const char* to_string(ImportanceRule rule);

}  // namespace codasplr
