#include "codasplr/simlab.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "codasplr/rng.hpp"

namespace codasplr {

namespace {

struct ScenarioTable {
    std::vector<const char*> rows;
    int relevant_count;  // the first relevant_count rows carry the signal
};

// Ten-part generating partitions. Signal rows come first; the remaining rows
// fill the complementary parts with noise balances.
const ScenarioTable kA10 = {{
                                "+++++-----",
                                "++++-00000",
                                "+++-000000",
                                "++-0000000",
                                "+-00000000",
                                "00000+----",
                                "000000+---",
                                "0000000+--",
                                "00000000+-",
                            },
                            5};

const ScenarioTable kB10 = {{
                                "+++++++---",
                                "++++++-000",
                                "+++++-0000",
                                "++++-00000",
                                "+++-000000",
                                "++-0000000",
                                "+-00000000",
                                "0000000+--",
                                "00000000+-",
                            },
                            7};

const ScenarioTable kC10 = {{
                                "++--------",
                                "+-00000000",
                                "00+-------",
                                "000+------",
                                "0000+-----",
                                "00000+----",
                                "000000+---",
                                "0000000+--",
                                "00000000+-",
                            },
                            2};

// Twenty-part analogues with the same split pattern: one block balance, then
// pivot splits inside the signal block, then pivot splits inside the noise
// block. Signal rows: 10 (A), 15 (B), 4 (C).
const ScenarioTable kA20 = {{
                                "++++++++++----------",
                                "+++++++++-0000000000",
                                "++++++++-00000000000",
                                "+++++++-000000000000",
                                "++++++-0000000000000",
                                "+++++-00000000000000",
                                "++++-000000000000000",
                                "+++-0000000000000000",
                                "++-00000000000000000",
                                "+-000000000000000000",
                                "0000000000+---------",
                                "00000000000+--------",
                                "000000000000+-------",
                                "0000000000000+------",
                                "00000000000000+-----",
                                "000000000000000+----",
                                "0000000000000000+---",
                                "00000000000000000+--",
                                "000000000000000000+-",
                            },
                            10};

const ScenarioTable kB20 = {{
                                "+++++++++++++++-----",
                                "++++++++++++++-00000",
                                "+++++++++++++-000000",
                                "++++++++++++-0000000",
                                "+++++++++++-00000000",
                                "++++++++++-000000000",
                                "+++++++++-0000000000",
                                "++++++++-00000000000",
                                "+++++++-000000000000",
                                "++++++-0000000000000",
                                "+++++-00000000000000",
                                "++++-000000000000000",
                                "+++-0000000000000000",
                                "++-00000000000000000",
                                "+-000000000000000000",
                                "000000000000000+----",
                                "0000000000000000+---",
                                "00000000000000000+--",
                                "000000000000000000+-",
                            },
                            15};

const ScenarioTable kC20 = {{
                                "++++----------------",
                                "+++-0000000000000000",
                                "++-00000000000000000",
                                "+-000000000000000000",
                                "0000+---------------",
                                "00000+--------------",
                                "000000+-------------",
                                "0000000+------------",
                                "00000000+-----------",
                                "000000000+----------",
                                "0000000000+---------",
                                "00000000000+--------",
                                "000000000000+-------",
                                "0000000000000+------",
                                "00000000000000+-----",
                                "000000000000000+----",
                                "0000000000000000+---",
                                "00000000000000000+--",
                                "000000000000000000+-",
                            },
                            4};

const ScenarioTable& scenario_table(ScenarioId id, int D) {
    if (D == 10) {
        switch (id) {
            case ScenarioId::A: return kA10;
            case ScenarioId::B: return kB10;
            case ScenarioId::C: return kC10;
        }
    }
    if (D == 20) {
        switch (id) {
            case ScenarioId::A: return kA20;
            case ScenarioId::B: return kB20;
            case ScenarioId::C: return kC20;
        }
    }
    throw Error(ErrorKind::UnsupportedDimension,
                "scenario " + std::string(to_string(id)) + " ships for D = 10 or D = 20, got D = " +
                    std::to_string(D));
}

Eigen::MatrixXi parse_rows(const std::vector<const char*>& rows, int D) {
    Eigen::MatrixXi signs(static_cast<Eigen::Index>(rows.size()), D);
    for (size_t k = 0; k < rows.size(); ++k)
        for (int p = 0; p < D; ++p) {
            switch (rows[k][p]) {
                case '+': signs(static_cast<Eigen::Index>(k), p) = 1; break;
                case '-': signs(static_cast<Eigen::Index>(k), p) = -1; break;
                default: signs(static_cast<Eigen::Index>(k), p) = 0; break;
            }
        }
    return signs;
}

}  // namespace

const char* to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::A: return "A";
        case ScenarioId::B: return "B";
        case ScenarioId::C: return "C";
    }
    return "?";
}

const char* to_string(ImportanceRule rule) {
    return rule == ImportanceRule::Strict ? "strict" : "lax";
}

Scenario build_scenario(ScenarioId id, int D) {
    const ScenarioTable& table = scenario_table(id, D);
    Scenario sc;
    sc.id = id;
    sc.D = D;
    sc.sbp = make_sbp(parse_rows(table.rows, D));
    for (int k = 0; k < D - 1; ++k)
        (k < table.relevant_count ? sc.relevant : sc.noise).push_back(k);
    return sc;
}

CompositionMatrix generate_dataset(const Scenario& sc, int n, std::uint64_t seed) {
    if (n < 1) throw Error(ErrorKind::BadConfig, "n must be >= 1");
    const int K = sc.D - 1;
    const int R = static_cast<int>(sc.relevant.size());
    const int N = static_cast<int>(sc.noise.size());

    // Cholesky factor of the equicorrelated signal covariance.
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(R, R, sc.rho);
    sigma.diagonal().setOnes();
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(sigma).matrixL();

    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-sc.noise_bound, sc.noise_bound);

    // Draw order per row: the R signal normals, then the N noise uniforms.
    Eigen::MatrixXd balances(n, K);
    Eigen::VectorXd eps(R);
    for (int row = 0; row < n; ++row) {
        for (int r = 0; r < R; ++r) eps(r) = gauss(engine);
        const Eigen::VectorXd signal = chol * eps;
        for (int r = 0; r < R; ++r) balances(row, sc.relevant[static_cast<size_t>(r)]) = signal(r);
        for (int u = 0; u < N; ++u) balances(row, sc.noise[static_cast<size_t>(u)]) = unif(engine);
    }

    return balances_to_composition(balances, sbp_to_contrast(sc.sbp),
                                   default_part_names(sc.D));
}

GroundTruth important_plrs(const Scenario& sc, ImportanceRule rule) {
    const PairIndex index(sc.D);
    GroundTruth truth;
    truth.rule = rule;

    // Two parts share a value in contrast column k exactly when their signs
    // match in partition row k, so the sign matrix decides both rules.
    for (int m = 0; m < index.size(); ++m) {
        const auto [i, j] = index.pair_at(m);
        bool important;
        if (rule == ImportanceRule::Strict) {
            important = true;
            for (int k : sc.noise)
                if (sc.sbp.signs(k, i) != sc.sbp.signs(k, j)) {
                    important = false;
                    break;
                }
        } else {
            important = false;
            for (int k : sc.relevant)
                if (sc.sbp.signs(k, i) != sc.sbp.signs(k, j)) {
                    important = true;
                    break;
                }
        }
        if (important) truth.important.push_back(m);
    }
    if (truth.important.empty())
        throw Error(ErrorKind::EmptyTruth, "scenario yields no important pairwise logratios");
    return truth;
}

Rates fpr_fnr(const std::vector<int>& selected, const GroundTruth& truth, int M) {
    if (M < 1) throw Error(ErrorKind::BadConfig, "M must be >= 1");
    std::vector<char> is_true(static_cast<size_t>(M), 0);
    for (int m : truth.important) {
        if (m < 0 || m >= M)
            throw Error(ErrorKind::DimensionMismatch, "truth column id outside [0, M)");
        is_true[static_cast<size_t>(m)] = 1;
    }
    std::vector<char> is_sel(static_cast<size_t>(M), 0);
    for (int m : selected) {
        if (m < 0 || m >= M)
            throw Error(ErrorKind::DimensionMismatch, "selected column id outside [0, M)");
        is_sel[static_cast<size_t>(m)] = 1;
    }

    int tp = 0, fp = 0, fn = 0, tn = 0;
    for (int m = 0; m < M; ++m) {
        const bool s = is_sel[static_cast<size_t>(m)] != 0;
        const bool t = is_true[static_cast<size_t>(m)] != 0;
        if (s && t) ++tp;
        if (s && !t) ++fp;
        if (!s && t) ++fn;
        if (!s && !t) ++tn;
    }

    Rates rates;
    if (fp + tn == 0) {
        rates.fpr = 0.0;
        rates.fpr_defined = false;
    } else {
        rates.fpr = static_cast<double>(fp) / static_cast<double>(fp + tn);
    }
    if (fn + tp == 0) {
        rates.fnr = 0.0;
        rates.fnr_defined = false;
    } else {
        rates.fnr = static_cast<double>(fn) / static_cast<double>(fn + tp);
    }
    return rates;
}

std::vector<double> capture_curve(const std::vector<int>& ordered, const GroundTruth& truth) {
    if (truth.important.empty()) throw Error(ErrorKind::EmptyTruth, "truth set is empty");
    std::vector<char> is_true;
    int max_id = 0;
    for (int m : truth.important) max_id = std::max(max_id, m);
    for (int m : ordered) max_id = std::max(max_id, m);
    is_true.assign(static_cast<size_t>(max_id) + 1, 0);
    for (int m : truth.important) is_true[static_cast<size_t>(m)] = 1;

    std::vector<double> curve;
    curve.reserve(ordered.size());
    int hits = 0;
    for (int m : ordered) {
        if (m >= 0 && is_true[static_cast<size_t>(m)] != 0) ++hits;
        curve.push_back(100.0 * static_cast<double>(hits) /
                        static_cast<double>(truth.important.size()));
    }
    return curve;
}

std::vector<double> rank_difference(const std::vector<int>& ordered,
                                    const Eigen::VectorXd& variances) {
    const int M = static_cast<int>(variances.size());
    if (ordered.empty() || static_cast<int>(ordered.size()) > M)
        throw Error(ErrorKind::LengthMismatch,
                    "ordering of " + std::to_string(ordered.size()) +
                        " entries against " + std::to_string(M) + " variances");
    for (int m : ordered)
        if (m < 0 || m >= M)
            throw Error(ErrorKind::DimensionMismatch, "ordered column id outside [0, M)");

    // Ideal rank: position in variance-descending order, ties by canonical
    // column order.
    std::vector<int> by_var(static_cast<size_t>(M));
    for (int m = 0; m < M; ++m) by_var[static_cast<size_t>(m)] = m;
    std::sort(by_var.begin(), by_var.end(), [&](int a, int b) {
        if (variances(a) != variances(b)) return variances(a) > variances(b);
        return a < b;
    });
    std::vector<int> rank(static_cast<size_t>(M));
    for (int pos = 0; pos < M; ++pos) rank[static_cast<size_t>(by_var[static_cast<size_t>(pos)])] = pos + 1;

    std::vector<double> diff;
    diff.reserve(ordered.size());
    long long cum = 0;
    for (size_t t = 0; t < ordered.size(); ++t) {
        cum += rank[static_cast<size_t>(ordered[t])];
        const long long ideal = static_cast<long long>(t + 1) * static_cast<long long>(t + 2) / 2;
        diff.push_back(static_cast<double>(cum - ideal));
    }
    return diff;
}

namespace {

RunRecord execute_run(const Scenario& sc, const BatchConfig& cfg, const GroundTruth& truth,
                      std::uint64_t run_seed) {
    RunRecord rec;
    rec.seed = run_seed;
    try {
        const CompositionMatrix X = generate_dataset(sc, cfg.n, run_seed);
        const PlrMatrix Xp = plr_expand(X, true);
        const int M = Xp.M();
        const int D = sc.D;

        const StabilityReport report = compute_paths(Xp, cfg.spca, cfg.grid_points);
        rec.alpha_max = report.grid.alpha_max;
        rec.alpha = report.grid.values;
        rec.dense_exvar = report.tradeoff.front().pct_exvar;

        const int G = report.grid_points();
        rec.fpr.resize(static_cast<size_t>(G));
        rec.fnr.resize(static_cast<size_t>(G));
        rec.pct_zero.resize(static_cast<size_t>(G));
        rec.pct_exvar.resize(static_cast<size_t>(G));
        for (int g = 0; g < G; ++g) {
            std::vector<int> sel;
            for (int m = 0; m < M; ++m)
                if (report.selected(m, g) != 0) sel.push_back(m);
            const Rates rates = fpr_fnr(sel, truth, M);
            rec.fpr[static_cast<size_t>(g)] = rates.fpr;
            rec.fnr[static_cast<size_t>(g)] = rates.fnr;
            rec.pct_zero[static_cast<size_t>(g)] = report.tradeoff[static_cast<size_t>(g)].pct_zero;
            rec.pct_exvar[static_cast<size_t>(g)] =
                report.tradeoff[static_cast<size_t>(g)].pct_exvar;
            if (!report.fit_meta[static_cast<size_t>(g)].converged) ++rec.nonconverged_fits;
        }

        const std::vector<int> spca_top = stability_order(report, D - 1);
        const StepSelection step = step_select(Xp, D - 1);

        rec.capture_spca = capture_curve(spca_top, truth);
        rec.capture_step = capture_curve(step.columns, truth);

        const Eigen::VectorXd variances = column_variances(Xp);
        rec.rankdiff_spca = rank_difference(spca_top, variances);
        rec.rankdiff_step = rank_difference(step.columns, variances);
        rec.ok = true;
    } catch (const std::exception& ex) {
        rec.ok = false;
        rec.error = ex.what();
    }
    return rec;
}

// Mean over successful runs of one vector-valued metric, in run order.
std::vector<double> mean_metric(const std::vector<RunRecord>& runs,
                                std::vector<double> RunRecord::*field) {
    std::vector<double> acc;
    int count = 0;
    for (const RunRecord& rec : runs) {
        if (!rec.ok) continue;
        const std::vector<double>& v = rec.*field;
        if (acc.empty()) acc.assign(v.size(), 0.0);
        if (v.size() != acc.size()) continue;
        for (size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
        ++count;
    }
    if (count > 0)
        for (double& a : acc) a /= static_cast<double>(count);
    return acc;
}

}  // namespace

BatchResult run_batch(const Scenario& sc, const BatchConfig& cfg) {
    if (cfg.runs < 1) throw Error(ErrorKind::BadConfig, "runs must be >= 1");
    if (cfg.jobs < 1) throw Error(ErrorKind::BadConfig, "jobs must be >= 1");

    BatchResult result;
    result.scenario = sc;
    result.config = cfg;
    result.truth = important_plrs(sc, cfg.rule);
    result.runs.resize(static_cast<size_t>(cfg.runs));

    const int workers = std::min(cfg.jobs, cfg.runs);
    if (workers <= 1) {
        for (int i = 0; i < cfg.runs; ++i)
            result.runs[static_cast<size_t>(i)] =
                execute_run(sc, cfg, result.truth, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    } else {
        // Runs are independent; records land in their run slot so that the
        // sequential aggregation below is identical for any worker count.
        std::atomic<int> next{0};
        auto work = [&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= cfg.runs) return;
                result.runs[static_cast<size_t>(i)] = execute_run(
                    sc, cfg, result.truth, derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    result.mean_alpha = mean_metric(result.runs, &RunRecord::alpha);
    result.mean_fpr = mean_metric(result.runs, &RunRecord::fpr);
    result.mean_fnr = mean_metric(result.runs, &RunRecord::fnr);
    result.mean_pct_zero = mean_metric(result.runs, &RunRecord::pct_zero);
    result.mean_pct_exvar = mean_metric(result.runs, &RunRecord::pct_exvar);
    result.mean_capture_spca = mean_metric(result.runs, &RunRecord::capture_spca);
    result.mean_capture_step = mean_metric(result.runs, &RunRecord::capture_step);
    result.mean_rankdiff_spca = mean_metric(result.runs, &RunRecord::rankdiff_spca);
    result.mean_rankdiff_step = mean_metric(result.runs, &RunRecord::rankdiff_step);

    int ok_count = 0;
    double sum = 0.0;
    for (const RunRecord& rec : result.runs) {
        if (!rec.ok) {
            ++result.failed_runs;
            continue;
        }
        sum += rec.dense_exvar;
        result.nonconverged_fits += rec.nonconverged_fits;
        ++ok_count;
    }
    if (ok_count > 0) {
        result.mean_dense_exvar = sum / static_cast<double>(ok_count);
        double ss = 0.0;
        for (const RunRecord& rec : result.runs)
            if (rec.ok) ss += (rec.dense_exvar - result.mean_dense_exvar) *
                              (rec.dense_exvar - result.mean_dense_exvar);
        result.sd_dense_exvar = ok_count > 1 ? std::sqrt(ss / static_cast<double>(ok_count - 1)) : 0.0;
    }
    return result;
}

}  // namespace codasplr
