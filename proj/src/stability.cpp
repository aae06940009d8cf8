#include "codasplr/stability.hpp"

#include <algorithm>
#include <cmath>

namespace codasplr {

StabilityReport compute_paths(const PlrMatrix& Xp, const SpcaConfig& cfg, int grid_points) {
    const double alpha_max = find_alpha_max(Xp, cfg);

    StabilityReport report;
    report.grid = make_grid(alpha_max, grid_points);
    report.pair_index = Xp.pair_index;
    report.warm_starts = true;

    const int M = Xp.M();
    const int G = report.grid.size();
    report.selected = Eigen::MatrixXi::Zero(M, G);
    report.tradeoff.resize(static_cast<size_t>(G));
    report.fit_meta.resize(static_cast<size_t>(G));

    Eigen::MatrixXd warm_B, warm_H;
    bool have_warm = false;

    for (int g = 0; g < G; ++g) {
        SpcaConfig point_cfg = cfg;
        point_cfg.alpha = report.grid.values[static_cast<size_t>(g)];
        if (g == 0) {
            // The dense model anchors the whole report (every pct_exvar is
            // compared against it), so it is converged well past the default.
            point_cfg.tol = std::min(cfg.tol, 1e-10);
            point_cfg.max_iter = std::max(cfg.max_iter, 5000);
        }

        auto& meta = report.fit_meta[static_cast<size_t>(g)];
        auto& point = report.tradeoff[static_cast<size_t>(g)];
        point.alpha = point_cfg.alpha;
        try {
            // The last grid point is refit cold: find_alpha_max verified full
            // sparsity for exactly that fit, and a warm start could settle in
            // a different basin.
            const bool cold = g == 0 || g == G - 1 || !have_warm;
            const SparsePcaFit f = cold ? fit(Xp, point_cfg)
                                        : fit_warm(Xp, point_cfg, warm_B, warm_H);
            for (int m : f.nonzero_rows) report.selected(m, g) = 1;
            point.pct_zero =
                100.0 * static_cast<double>(M - static_cast<int>(f.nonzero_rows.size())) /
                static_cast<double>(M);
            point.pct_exvar = f.exvar_pct;
            meta.ok = true;
            meta.converged = f.converged;
            meta.iterations = f.iterations;
            warm_B = f.B;
            warm_H = f.H;
            have_warm = true;
        } catch (const Error& err) {
            meta.ok = false;
            meta.converged = false;
            meta.error = err.what();
            point.pct_zero = 100.0;
            point.pct_exvar = 0.0;
            have_warm = false;
        }
    }

    report.totals.resize(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) report.totals[static_cast<size_t>(m)] = report.selected.row(m).sum();

    report.exvar_single.resize(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m)
        report.exvar_single[static_cast<size_t>(m)] = exvar_of_subset(Xp, {m});

    report.order.resize(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) report.order[static_cast<size_t>(m)] = m;
    std::sort(report.order.begin(), report.order.end(), [&](int a, int b) {
        const int ta = report.totals[static_cast<size_t>(a)];
        const int tb = report.totals[static_cast<size_t>(b)];
        if (ta != tb) return ta > tb;
        const double ea = report.exvar_single[static_cast<size_t>(a)];
        const double eb = report.exvar_single[static_cast<size_t>(b)];
        if (ea != eb) return ea > eb;
        return a < b;
    });

    return report;
}

std::vector<int> stability_order(const StabilityReport& report, int top) {
    if (top < 1 || top > report.M())
        throw Error(ErrorKind::BadConfig,
                    "top = " + std::to_string(top) + " outside [1, M = " +
                        std::to_string(report.M()) + "]");
    return {report.order.begin(), report.order.begin() + top};
}

PartsHeatmap parts_heatmap(const StabilityReport& report) {
    const int D = report.pair_index.D;
    const int G = report.grid_points();
    PartsHeatmap heat;
    heat.counts = Eigen::MatrixXi::Zero(D, G);
    for (int m = 0; m < report.M(); ++m) {
        const auto [i, j] = report.pair_index.pair_at(m);
        for (int g = 0; g < G; ++g) {
            if (report.selected(m, g) != 0) {
                heat.counts(i, g) += 1;
                heat.counts(j, g) += 1;
            }
        }
    }
    return heat;
}

std::vector<TradeoffPoint> tradeoff_curve(const StabilityReport& report) { return report.tradeoff; }

}  // namespace codasplr
