#include "codasplr/commands.hpp"

#include <filesystem>
#include <json.hpp>
#include <vector>

#include "codasplr/csv.hpp"
#include "codasplr/log.hpp"
#include "codasplr/rng.hpp"
#include "codasplr/svg.hpp"
#include "codasplr/version.hpp"

namespace codasplr {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Collects every file a command writes; unless the command completes and
// calls commit(), the destructor removes them so failures leave no partial
// output behind.
class OutputGuard {
  public:
    explicit OutputGuard(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorKind::IoError, "cannot create '" + dir + "': " + ec.message());
    }

    ~OutputGuard() {
        if (committed_) return;
        for (const auto& path : written_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
    }

    std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

    void write(const std::string& name, const std::string& content) {
        const std::string full = path(name);
        write_text_file(full, content);
        written_.push_back(full);
        log_info("wrote " + full);
    }

    void write(const std::string& name, const Table& table) { write(name, to_csv(table)); }

    void commit() { committed_ = true; }

  private:
    std::string dir_;
    std::vector<std::string> written_;
    bool committed_ = false;
};

ordered_json base_metadata(const char* command) {
    ordered_json meta;
    meta["tool"] = "coda-splr";
    meta["version"] = kVersion;
    meta["command"] = command;
    return meta;
}

ordered_json grid_json(const AlphaGrid& grid) {
    ordered_json j;
    j["alpha_max"] = grid.alpha_max;
    j["points"] = grid.size();
    j["values"] = grid.values;
    return j;
}

std::string grid_col_name(int g) { return "a" + std::to_string(g); }

Table tradeoff_table(const std::vector<TradeoffPoint>& curve) {
    Table t;
    t.header = {"alpha", "pct_zero", "pct_exvar"};
    for (const TradeoffPoint& p : curve)
        t.rows.push_back({fmt_double(p.alpha), fmt_double(p.pct_zero), fmt_double(p.pct_exvar)});
    return t;
}

Table stability_table(const StabilityReport& report, const std::vector<std::string>& names) {
    Table t;
    t.header.push_back("pair");
    for (int g = 0; g < report.grid_points(); ++g) t.header.push_back(grid_col_name(g));
    t.header.push_back("total");
    t.header.push_back("exvar");
    for (int m : report.order) {
        const auto [i, j] = report.pair_index.pair_at(m);
        std::vector<std::string> row;
        row.reserve(t.header.size());
        row.push_back(plr_label(names[static_cast<size_t>(i)], names[static_cast<size_t>(j)]));
        for (int g = 0; g < report.grid_points(); ++g)
            row.push_back(report.selected(m, g) != 0 ? "1" : "0");
        row.push_back(fmt_int(report.totals[static_cast<size_t>(m)]));
        row.push_back(fmt_double(report.exvar_single[static_cast<size_t>(m)]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table parts_table(const PartsHeatmap& heat, const std::vector<std::string>& names) {
    Table t;
    t.header.push_back("part");
    for (int g = 0; g < static_cast<int>(heat.counts.cols()); ++g)
        t.header.push_back(grid_col_name(g));
    for (int p = 0; p < static_cast<int>(heat.counts.rows()); ++p) {
        std::vector<std::string> row;
        row.reserve(t.header.size());
        row.push_back(names[static_cast<size_t>(p)]);
        for (int g = 0; g < static_cast<int>(heat.counts.cols()); ++g)
            row.push_back(fmt_int(heat.counts(p, g)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table step_table(const StepSelection& sel, const std::vector<std::string>& names) {
    Table t;
    t.header = {"rank", "pair", "exvar_cum"};
    for (size_t r = 0; r < sel.ratios.size(); ++r) {
        const auto [i, j] = sel.ratios[r];
        t.rows.push_back({fmt_int(static_cast<long long>(r) + 1),
                          plr_label(names[static_cast<size_t>(i)], names[static_cast<size_t>(j)]),
                          fmt_double(sel.exvar_path[r])});
    }
    return t;
}

struct LoadedInput {
    CompositionMatrix X;
    PlrMatrix Xp;
};

LoadedInput load_input(const std::string& input, bool id_column) {
    if (input.empty()) throw Error(ErrorKind::BadConfig, "--input is required");
    LoadedInput loaded{ingest_csv(input, id_column), {}};
    loaded.Xp = plr_expand(loaded.X, true);
    return loaded;
}

ordered_json input_json(const std::string& path, const CompositionMatrix& X) {
    ordered_json j;
    j["path"] = path;
    j["n"] = X.n();
    j["D"] = X.D();
    j["parts"] = X.part_names;
    return j;
}

ordered_json fit_meta_json(const StabilityReport& report) {
    ordered_json j;
    int nonconverged = 0;
    ordered_json errors = ordered_json::array();
    for (size_t g = 0; g < report.fit_meta.size(); ++g) {
        const GridFitMeta& meta = report.fit_meta[g];
        if (!meta.converged) ++nonconverged;
        if (!meta.ok) {
            ordered_json e;
            e["grid_index"] = g;
            e["error"] = meta.error;
            errors.push_back(e);
        }
    }
    j["warm_starts"] = report.warm_starts;
    j["nonconverged_fits"] = nonconverged;
    j["fit_errors"] = errors;
    return j;
}

int count_nonconverged(const StabilityReport& report) {
    int count = 0;
    for (const GridFitMeta& meta : report.fit_meta)
        if (!meta.converged) ++count;
    return count;
}

SpcaConfig spca_config(int k, double beta, std::uint64_t seed) {
    SpcaConfig cfg;
    cfg.k = k;
    cfg.beta = beta;
    cfg.seed = seed;
    return cfg;
}

CommandOutcome paths_like(const std::string& input, bool id_column, const std::string& out_dir,
                          int k, double beta, int grid, std::uint64_t seed, bool svg,
                          const char* command, bool with_step) {
    const LoadedInput loaded = load_input(input, id_column);
    const SpcaConfig cfg = spca_config(k, beta, seed);
    const StabilityReport report = compute_paths(loaded.Xp, cfg, grid);
    const PartsHeatmap heat = parts_heatmap(report);

    OutputGuard out(out_dir);
    const Table tradeoff = tradeoff_table(report.tradeoff);
    const Table stability = stability_table(report, loaded.X.part_names);
    const Table parts = parts_table(heat, loaded.X.part_names);
    out.write("tradeoff.csv", tradeoff);
    out.write("stability.csv", stability);
    out.write("parts.csv", parts);
    if (svg) {
        out.write("tradeoff.svg", render_svg(tradeoff, SvgKind::Tradeoff));
        out.write("stability.svg", render_svg(stability, SvgKind::Stability));
        out.write("parts.svg", render_svg(parts, SvgKind::Parts));
    }

    CommandOutcome outcome;
    outcome.nonconverged_fits = count_nonconverged(report);

    ordered_json meta = base_metadata(command);
    ordered_json config;
    config["input"] = input;
    config["id_column"] = id_column;
    config["out"] = out_dir;
    config["k"] = k;
    config["beta"] = beta;
    config["grid"] = grid;
    config["seed"] = seed;
    config["svg"] = svg;
    meta["config"] = config;
    meta["input_data"] = input_json(input, loaded.X);
    meta["grid"] = grid_json(report.grid);
    meta["fits"] = fit_meta_json(report);

    if (with_step) {
        const int D = static_cast<int>(loaded.X.D());
        const StepSelection sel = step_select(loaded.Xp, D - 1);
        out.write("step.csv", step_table(sel, loaded.X.part_names));

        ordered_json summary;
        summary["dense_exvar_pct"] = report.tradeoff.front().pct_exvar;
        summary["total_variance"] = total_variance(loaded.Xp);
        ordered_json top = ordered_json::array();
        for (int m : stability_order(report, D - 1)) {
            const auto [i, j] = report.pair_index.pair_at(m);
            ordered_json entry;
            entry["pair"] = plr_label(loaded.X.part_names[static_cast<size_t>(i)],
                                      loaded.X.part_names[static_cast<size_t>(j)]);
            entry["total"] = report.totals[static_cast<size_t>(m)];
            entry["exvar_single_pct"] = report.exvar_single[static_cast<size_t>(m)];
            top.push_back(entry);
        }
        summary["most_stable"] = top;
        ordered_json steps = ordered_json::array();
        for (size_t r = 0; r < sel.ratios.size(); ++r) {
            const auto [i, j] = sel.ratios[r];
            ordered_json entry;
            entry["rank"] = r + 1;
            entry["pair"] = plr_label(loaded.X.part_names[static_cast<size_t>(i)],
                                      loaded.X.part_names[static_cast<size_t>(j)]);
            entry["exvar_cum_pct"] = sel.exvar_path[r];
            steps.push_back(entry);
        }
        summary["step_selection"] = steps;
        out.write("summary.json", summary.dump(2) + "\n");
    }

    out.write("metadata.json", meta.dump(2) + "\n");
    out.commit();
    if (outcome.nonconverged_fits > 0)
        log_warn(std::to_string(outcome.nonconverged_fits) + " grid fits hit the iteration cap");
    return outcome;
}

}  // namespace

ScenarioId parse_scenario(const std::string& name) {
    if (name == "A" || name == "a") return ScenarioId::A;
    if (name == "B" || name == "b") return ScenarioId::B;
    if (name == "C" || name == "c") return ScenarioId::C;
    throw Error(ErrorKind::BadConfig, "scenario must be A, B, or C, got '" + name + "'");
}

ImportanceRule parse_rule(const std::string& name) {
    if (name == "strict") return ImportanceRule::Strict;
    if (name == "lax") return ImportanceRule::Lax;
    throw Error(ErrorKind::BadConfig, "rule must be strict or lax, got '" + name + "'");
}

CommandOutcome cmd_paths(const PathsConfig& cfg) {
    return paths_like(cfg.input, cfg.id_column, cfg.out_dir, cfg.k, cfg.beta, cfg.grid, cfg.seed,
                      cfg.svg, "paths", false);
}

CommandOutcome cmd_analyze(const AnalyzeConfig& cfg) {
    return paths_like(cfg.input, cfg.id_column, cfg.out_dir, cfg.k, cfg.beta, cfg.grid, cfg.seed,
                      cfg.svg, "analyze", true);
}

CommandOutcome cmd_step(const StepConfig& cfg) {
    const LoadedInput loaded = load_input(cfg.input, cfg.id_column);
    const int D = static_cast<int>(loaded.X.D());
    const int max_ratios = cfg.max_ratios == 0 ? D - 1 : cfg.max_ratios;
    const StepSelection sel = step_select(loaded.Xp, max_ratios);

    OutputGuard out(cfg.out_dir);
    out.write("step.csv", step_table(sel, loaded.X.part_names));

    ordered_json meta = base_metadata("step");
    ordered_json config;
    config["input"] = cfg.input;
    config["id_column"] = cfg.id_column;
    config["out"] = cfg.out_dir;
    config["max_ratios"] = max_ratios;
    meta["config"] = config;
    meta["input_data"] = input_json(cfg.input, loaded.X);
    out.write("metadata.json", meta.dump(2) + "\n");
    out.commit();
    return {};
}

CommandOutcome cmd_simulate(const SimulateConfig& cfg) {
    const Scenario sc = build_scenario(parse_scenario(cfg.scenario), cfg.dim);
    BatchConfig batch;
    batch.n = cfg.n;
    batch.runs = cfg.runs;
    batch.seed = cfg.seed;
    batch.spca = spca_config(cfg.k, cfg.beta, cfg.seed);
    batch.rule = parse_rule(cfg.rule);
    batch.grid_points = cfg.grid;
    batch.jobs = cfg.jobs;

    const BatchResult result = run_batch(sc, batch);

    OutputGuard out(cfg.out_dir);

    Table runs;
    runs.header = {"run", "seed", "ok", "alpha_max", "dense_exvar", "nonconverged_fits", "error"};
    for (size_t i = 0; i < result.runs.size(); ++i) {
        const RunRecord& rec = result.runs[i];
        runs.rows.push_back({fmt_int(static_cast<long long>(i)),
                             std::to_string(rec.seed),
                             rec.ok ? "1" : "0",
                             fmt_double(rec.alpha_max),
                             fmt_double(rec.dense_exvar),
                             fmt_int(rec.nonconverged_fits),
                             rec.error});
    }
    out.write("runs.csv", runs);

    Table rates;
    rates.header = {"grid_index", "mean_alpha", "mean_fpr", "mean_fnr", "mean_pct_zero",
                    "mean_pct_exvar"};
    for (size_t g = 0; g < result.mean_fpr.size(); ++g)
        rates.rows.push_back({fmt_int(static_cast<long long>(g)),
                              fmt_double(result.mean_alpha[g]),
                              fmt_double(result.mean_fpr[g]),
                              fmt_double(result.mean_fnr[g]),
                              fmt_double(result.mean_pct_zero[g]),
                              fmt_double(result.mean_pct_exvar[g])});
    out.write("fpr_fnr.csv", rates);

    Table capture;
    capture.header = {"method", "t", "mean_capture_pct"};
    for (size_t t = 0; t < result.mean_capture_spca.size(); ++t)
        capture.rows.push_back({"spca", fmt_int(static_cast<long long>(t) + 1),
                                fmt_double(result.mean_capture_spca[t])});
    for (size_t t = 0; t < result.mean_capture_step.size(); ++t)
        capture.rows.push_back({"step", fmt_int(static_cast<long long>(t) + 1),
                                fmt_double(result.mean_capture_step[t])});
    out.write("capture_curve.csv", capture);

    Table rankdiff;
    rankdiff.header = {"method", "t", "mean_rank_diff"};
    for (size_t t = 0; t < result.mean_rankdiff_spca.size(); ++t)
        rankdiff.rows.push_back({"spca", fmt_int(static_cast<long long>(t) + 1),
                                 fmt_double(result.mean_rankdiff_spca[t])});
    for (size_t t = 0; t < result.mean_rankdiff_step.size(); ++t)
        rankdiff.rows.push_back({"step", fmt_int(static_cast<long long>(t) + 1),
                                 fmt_double(result.mean_rankdiff_step[t])});
    out.write("rank_difference.csv", rankdiff);

    ordered_json aggregate;
    aggregate["scenario"] = to_string(sc.id);
    aggregate["D"] = sc.D;
    aggregate["rule"] = to_string(result.truth.rule);
    aggregate["truth_size"] = result.truth.important.size();
    aggregate["truth_columns"] = result.truth.important;
    aggregate["runs"] = cfg.runs;
    aggregate["failed_runs"] = result.failed_runs;
    aggregate["nonconverged_fits"] = result.nonconverged_fits;
    aggregate["mean_dense_exvar"] = result.mean_dense_exvar;
    aggregate["sd_dense_exvar"] = result.sd_dense_exvar;
    out.write("aggregate.json", aggregate.dump(2) + "\n");

    if (cfg.svg && !result.mean_alpha.empty()) {
        Table mean_tradeoff;
        mean_tradeoff.header = {"mean_alpha", "mean_pct_zero", "mean_pct_exvar"};
        for (size_t g = 0; g < result.mean_alpha.size(); ++g)
            mean_tradeoff.rows.push_back({fmt_double(result.mean_alpha[g]),
                                          fmt_double(result.mean_pct_zero[g]),
                                          fmt_double(result.mean_pct_exvar[g])});
        out.write("tradeoff_mean.svg", render_svg(mean_tradeoff, SvgKind::Tradeoff));

        Table mean_rates;
        mean_rates.header = {"mean_alpha", "mean_fpr", "mean_fnr"};
        for (size_t g = 0; g < result.mean_alpha.size(); ++g)
            mean_rates.rows.push_back({fmt_double(result.mean_alpha[g]),
                                       fmt_double(result.mean_fpr[g]),
                                       fmt_double(result.mean_fnr[g])});
        out.write("fpr_fnr_mean.svg", render_svg(mean_rates, SvgKind::Tradeoff));
    }

    ordered_json meta = base_metadata("simulate");
    ordered_json config;
    config["scenario"] = cfg.scenario;
    config["dim"] = cfg.dim;
    config["n"] = cfg.n;
    config["runs"] = cfg.runs;
    config["seed"] = cfg.seed;
    config["rule"] = cfg.rule;
    config["out"] = cfg.out_dir;
    config["k"] = cfg.k;
    config["beta"] = cfg.beta;
    config["grid"] = cfg.grid;
    config["jobs"] = cfg.jobs;
    config["svg"] = cfg.svg;
    meta["config"] = config;
    meta["seed_derivation"] = kSeedDerivation;
    ordered_json seeds = ordered_json::array();
    for (const RunRecord& rec : result.runs) seeds.push_back(rec.seed);
    meta["run_seeds"] = seeds;
    meta["truth_size"] = result.truth.important.size();
    meta["failed_runs"] = result.failed_runs;
    meta["nonconverged_fits"] = result.nonconverged_fits;
    out.write("metadata.json", meta.dump(2) + "\n");

    out.commit();
    CommandOutcome outcome;
    outcome.nonconverged_fits = result.nonconverged_fits;
    outcome.failed_runs = result.failed_runs;
    if (result.failed_runs > 0)
        log_warn(std::to_string(result.failed_runs) + " runs failed; see runs.csv");
    return outcome;
}

}  // namespace codasplr
