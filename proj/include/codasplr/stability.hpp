#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "codasplr/spca.hpp"

namespace codasplr {

/// One grid point of the sparsity/variance tradeoff curve. Percentages refer
/// to PLR rows with all-zero loadings (pct_zero) and to the variability
/// captured by the fitted score span (pct_exvar).
struct TradeoffPoint {
    double alpha = 0.0;
    double pct_zero = 0.0;
    double pct_exvar = 0.0;
};

/// Per-grid-point fit diagnostics. A point that threw is recorded with
/// ok = false and an empty selection instead of aborting the sweep.
struct GridFitMeta {
    bool ok = true;
    bool converged = false;
    int iterations = 0;
    std::string error;
};

/// Selection paths of every PLR over the alpha grid.
///
/// selected(m, g) is 1 when PLR m carries a nonzero loading in any of the k
/// components of the grid-point-g model. totals are row sums (the stability
/// counts), exvar_single the one-column projection percentages, and order
/// ranks all M PLRs by totals descending, ties by exvar_single descending,
/// then canonical pair order.
struct StabilityReport {
    AlphaGrid grid;
    Eigen::MatrixXi selected;
    std::vector<int> totals;
    std::vector<double> exvar_single;
    std::vector<int> order;
    std::vector<TradeoffPoint> tradeoff;
    std::vector<GridFitMeta> fit_meta;
    bool warm_starts = true;
    PairIndex pair_index;

    int M() const { return static_cast<int>(selected.rows()); }
    int grid_points() const { return grid.size(); }
};

/// Part-level selection counts: counts(p, g) is the number of PLRs selected
/// at grid point g that contain part p. Every selected PLR contributes to
/// exactly two parts, so each column sums to twice the selection count.
struct PartsHeatmap {
    Eigen::MatrixXi counts;
};

/// Sweeps the alpha grid over Xp. The grid is derived from find_alpha_max;
/// interior points warm-start from the previous solution, the dense endpoint
/// runs to a tightened tolerance (it anchors every comparison), and the final
/// point is refit cold so it reproduces the verified full-sparsity fit.
/// cfg.alpha is ignored. Solver failures at single points land in fit_meta.
StabilityReport compute_paths(const PlrMatrix& Xp, const SpcaConfig& cfg, int grid_points = 51);

/// First `top` PLR column ids in stability order. BadConfig unless
/// 1 <= top <= M.
std::vector<int> stability_order(const StabilityReport& report, int top);

/// Aggregates the selection matrix to parts.
PartsHeatmap parts_heatmap(const StabilityReport& report);

/// The stored tradeoff curve, one point per grid value.
std::vector<TradeoffPoint> tradeoff_curve(const StabilityReport& report);

}  // namespace codasplr
