#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "codasplr/commands.hpp"
#include "codasplr/csv.hpp"
#include "codasplr/svg.hpp"

using namespace codasplr;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = CODASPLR_FIXTURE_DIR;
const std::string kData = CODASPLR_DATA_DIR;

std::string fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("codasplr_" + tag);
    fs::remove_all(dir);
    return dir.string();
}

std::string slurp(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("numbers format to their shortest exact form") {
    CHECK(fmt_double(0.1) == "0.1");
    CHECK(fmt_double(1.0) == "1");
    CHECK(fmt_double(-0.5) == "-0.5");
    CHECK(fmt_double(0.0) == "0");
    CHECK(fmt_double(100.0) == "100");
    CHECK(fmt_int(42) == "42");
    CHECK(fmt_int(-7) == "-7");

    // the textual form parses back to the identical double
    for (double v : {1.0 / 3.0, 2.5e-17, 53.92362378428709, -1e300}) {
        const std::string s = fmt_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("csv writing quotes exactly the cells that need it") {
    Table t;
    t.header = {"plain", "with,comma", "with\"quote"};
    t.rows.push_back({"a", "b,c", "d\"e"});
    t.rows.push_back({"multi\nline", "ok", ""});
    const std::string text = to_csv(t);
    CHECK(text.find("\"with,comma\"") != std::string::npos);
    CHECK(text.find("\"with\"\"quote\"") != std::string::npos);
    CHECK(text.find("\"multi\nline\"") != std::string::npos);
    CHECK(text.find("plain") == 0);

    Table back = parse_csv(text);
    CHECK(back == t);
}

TEST_CASE("csv parser round trips and skips blank lines") {
    const std::string text = "h1,h2\n\nv1,v2\n\n";
    Table t = parse_csv(text);
    REQUIRE(t.header.size() == 2);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][0] == "v1");
    CHECK(t.rows[0][1] == "v2");

    // CRLF input parses the same
    Table crlf = parse_csv("h1,h2\r\nv1,v2\r\n");
    CHECK(crlf == t);
}

TEST_CASE("csv parser reports malformed input with location") {
    SUBCASE("ragged row") {
        try {
            parse_csv("a,b,c\n1,2\n");
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ParseError);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("quote inside an unquoted cell") {
        CHECK_THROWS_AS(parse_csv("a,b\n1,2\"bad\n"), Error);
    }
    SUBCASE("unterminated quoted cell") {
        CHECK_THROWS_AS(parse_csv("a,b\n\"open,2\n"), Error);
    }
    SUBCASE("empty input") { CHECK_THROWS_AS(parse_csv(""), Error); }
}

TEST_CASE("text files round trip through disk") {
    const std::string dir = fresh_dir("textio");
    fs::create_directories(dir);
    const std::string path = dir + "/probe.txt";
    const std::string content = "line1\nline2 with \"quotes\" and, commas\n";
    write_text_file(path, content);
    CHECK(read_text_file(path) == content);

    CHECK_THROWS_AS(read_text_file(dir + "/missing.txt"), Error);
    CHECK_THROWS_AS(write_text_file(dir + "/no/such/dir/f.txt", "x"), Error);
    fs::remove_all(dir);
}

TEST_CASE("composition ingestion reads the bundled datasets") {
    CompositionMatrix rock = ingest_csv(kData + "/aar_shape.csv");
    CHECK(rock.n() == 87);
    CHECK(rock.D() == 10);
    CHECK(rock.part_names.front() == "SiO2");
    CHECK(rock.part_names.back() == "P2O5");

    CompositionMatrix glass = ingest_csv(kData + "/glass_shape.csv", true);
    CHECK(glass.n() == 47);
    CHECK(glass.D() == 11);
    CHECK(glass.part_names.front() == "Si");
    CHECK(glass.part_names.back() == "Sb");
}

TEST_CASE("composition ingestion rejects bad files with context") {
    SUBCASE("zero entry") {
        try {
            ingest_csv(kFixtures + "/bad_zero.csv");
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NonPositiveEntry);
        }
    }
    SUBCASE("non-numeric cell") {
        try {
            ingest_csv(kFixtures + "/bad_number.csv");
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ParseError);
            CHECK(std::string(e.what()).find("oops") != std::string::npos);
        }
    }
    SUBCASE("ragged row") { CHECK_THROWS_AS(ingest_csv(kFixtures + "/ragged.csv"), Error); }
    SUBCASE("missing file") {
        try {
            ingest_csv(kFixtures + "/does_not_exist.csv");
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::IoError);
        }
    }
    SUBCASE("small valid file") {
        CompositionMatrix ok = ingest_csv(kFixtures + "/comp_ok.csv");
        CHECK(ok.n() == 6);
        CHECK(ok.D() == 3);
        CHECK(ok.values(1, 2) == 7.0);
    }
}

TEST_CASE("svg rendering is deterministic and self-contained") {
    Table t;
    t.header = {"alpha", "pct_zero", "pct_exvar"};
    t.rows.push_back({"0", "0", "53.5"});
    t.rows.push_back({"0.5", "40", "52.6"});
    t.rows.push_back({"1", "100", "0"});

    const std::string a = render_svg(t, SvgKind::Tradeoff);
    const std::string b = render_svg(t, SvgKind::Tradeoff);
    CHECK(a == b);
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("</svg>") != std::string::npos);
    CHECK(a.find("pct_zero") != std::string::npos);
    CHECK(a.find("pct_exvar") != std::string::npos);
}

TEST_CASE("svg kinds validate their tables") {
    SUBCASE("heatmap cells must be binary") {
        Table t;
        t.header = {"pair", "a0", "a1", "total", "exvar"};
        t.rows.push_back({"ln(a/b)", "1", "2", "3", "50"});
        try {
            render_svg(t, SvgKind::Stability);
            FAIL("expected throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UnsupportedKind);
        }
    }
    SUBCASE("line chart needs numeric cells") {
        Table t;
        t.header = {"x", "y1", "y2"};
        t.rows.push_back({"zero", "1", "2"});
        CHECK_THROWS_AS(render_svg(t, SvgKind::Tradeoff), Error);
    }
    SUBCASE("valid heatmap renders") {
        Table t;
        t.header = {"pair", "a0", "a1", "total", "exvar"};
        t.rows.push_back({"ln(a/b)", "1", "0", "1", "60.5"});
        t.rows.push_back({"ln(a/c)", "0", "0", "0", "10"});
        const std::string svg = render_svg(t, SvgKind::Stability);
        CHECK(svg.find("ln(a/b)") != std::string::npos);
    }
    SUBCASE("parts heatmap renders with scaled opacity") {
        Table t;
        t.header = {"part", "a0", "a1"};
        t.rows.push_back({"SiO2", "2", "0"});
        t.rows.push_back({"MgO", "1", "1"});
        const std::string svg = render_svg(t, SvgKind::Parts);
        CHECK(svg.find("SiO2") != std::string::npos);
        CHECK(svg.find("fill-opacity") != std::string::npos);
    }
}

TEST_CASE("paths command writes a complete, reproducible bundle") {
    PathsConfig cfg;
    cfg.input = kData + "/aar_shape.csv";
    cfg.out_dir = fresh_dir("paths");
    cfg.grid = 11;
    cfg.svg = true;

    CommandOutcome outcome = cmd_paths(cfg);
    CHECK(outcome.nonconverged_fits == 0);
    for (const char* name :
         {"tradeoff.csv", "stability.csv", "parts.csv", "tradeoff.svg", "stability.svg",
          "parts.svg", "metadata.json"})
        CHECK(fs::exists(fs::path(cfg.out_dir) / name));

    const auto meta = nlohmann::json::parse(slurp(cfg.out_dir + "/metadata.json"));
    CHECK(meta.at("tool") == "coda-splr");
    CHECK(meta.at("command") == "paths");
    CHECK(meta.at("config").at("grid") == 11);
    CHECK(meta.at("input_data").at("n") == 87);
    CHECK(meta.at("grid").at("values").size() == 11);
    CHECK(meta.at("fits").at("warm_starts") == true);

    // rerunning into the same directory reproduces every byte
    std::map<std::string, std::string> before;
    for (const auto& entry : fs::directory_iterator(cfg.out_dir))
        before[entry.path().filename().string()] = slurp(entry.path().string());
    cmd_paths(cfg);
    for (const auto& [name, content] : before)
        CHECK(slurp(cfg.out_dir + "/" + name) == content);

    const Table tradeoff = parse_csv(slurp(cfg.out_dir + "/tradeoff.csv"));
    CHECK(tradeoff.rows.size() == 11);
    const Table stability = parse_csv(slurp(cfg.out_dir + "/stability.csv"));
    CHECK(stability.rows.size() == 45);
    CHECK(stability.rows[0][0].rfind("ln(", 0) == 0);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("step command writes rank, pair, and cumulative share") {
    StepConfig cfg;
    cfg.input = kData + "/glass_shape.csv";
    cfg.id_column = true;
    cfg.out_dir = fresh_dir("step");
    cmd_step(cfg);

    const Table t = parse_csv(slurp(cfg.out_dir + "/step.csv"));
    REQUIRE(t.header == std::vector<std::string>{"rank", "pair", "exvar_cum"});
    CHECK(t.rows.size() == 10);
    CHECK(t.rows[0][0] == "1");
    CHECK(std::stod(t.rows.back()[2]) == doctest::Approx(100.0).epsilon(1e-8));
    double prev = 0.0;
    for (const auto& row : t.rows) {
        const double v = std::stod(row[2]);
        CHECK(v > prev);
        prev = v;
    }
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("analyze command adds the greedy selection and a summary") {
    AnalyzeConfig cfg;
    cfg.input = kFixtures + "/comp_ok.csv";
    cfg.out_dir = fresh_dir("analyze");
    cfg.grid = 7;
    cmd_analyze(cfg);

    for (const char* name : {"tradeoff.csv", "stability.csv", "parts.csv", "step.csv",
                             "summary.json", "metadata.json"})
        CHECK(fs::exists(fs::path(cfg.out_dir) / name));
    const auto summary = nlohmann::json::parse(slurp(cfg.out_dir + "/summary.json"));
    CHECK(summary.at("dense_exvar_pct").is_number());
    CHECK(summary.at("most_stable").is_array());
    CHECK(summary.at("step_selection").size() == 2);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("simulate command writes per-run and aggregate scores") {
    SimulateConfig cfg;
    cfg.scenario = "C";
    cfg.dim = 10;
    cfg.n = 40;
    cfg.runs = 2;
    cfg.seed = 11;
    cfg.grid = 7;
    cfg.out_dir = fresh_dir("simulate");
    CommandOutcome outcome = cmd_simulate(cfg);
    CHECK(outcome.failed_runs == 0);

    for (const char* name : {"runs.csv", "fpr_fnr.csv", "capture_curve.csv",
                             "rank_difference.csv", "aggregate.json", "metadata.json"})
        CHECK(fs::exists(fs::path(cfg.out_dir) / name));

    const Table runs = parse_csv(slurp(cfg.out_dir + "/runs.csv"));
    CHECK(runs.rows.size() == 2);
    const Table rates = parse_csv(slurp(cfg.out_dir + "/fpr_fnr.csv"));
    CHECK(rates.rows.size() == 7);
    const Table capture = parse_csv(slurp(cfg.out_dir + "/capture_curve.csv"));
    CHECK(capture.rows.size() == 18);  // two methods, t = 1..9

    const auto agg = nlohmann::json::parse(slurp(cfg.out_dir + "/aggregate.json"));
    CHECK(agg.at("scenario") == "C");
    CHECK(agg.at("truth_size") == 1);
    CHECK(agg.at("failed_runs") == 0);

    const auto meta = nlohmann::json::parse(slurp(cfg.out_dir + "/metadata.json"));
    CHECK(meta.at("run_seeds").size() == 2);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("failed commands leave no partial outputs") {
    PathsConfig cfg;
    cfg.input = kFixtures + "/bad_zero.csv";
    cfg.out_dir = fresh_dir("guard");
    CHECK_THROWS_AS(cmd_paths(cfg), Error);
    bool has_files = false;
    if (fs::exists(cfg.out_dir))
        for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
            (void)entry;
            has_files = true;
        }
    CHECK_FALSE(has_files);

    SimulateConfig sim;
    sim.scenario = "Q";
    sim.out_dir = fresh_dir("guard2");
    CHECK_THROWS_AS(cmd_simulate(sim), Error);
    CHECK_FALSE(fs::exists(sim.out_dir));
}

TEST_CASE("scenario and rule names parse strictly") {
    CHECK(parse_scenario("A") == ScenarioId::A);
    CHECK(parse_scenario("b") == ScenarioId::B);
    CHECK_THROWS_AS(parse_scenario("D"), Error);
    CHECK(parse_rule("strict") == ImportanceRule::Strict);
    CHECK(parse_rule("lax") == ImportanceRule::Lax);
    CHECK_THROWS_AS(parse_rule("Strict"), Error);
}

}  // TEST_SUITE
