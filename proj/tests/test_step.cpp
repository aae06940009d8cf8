#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "codasplr/step.hpp"
#include "test_util.hpp"

using namespace codasplr;

namespace {

// Forest check independent of the selector's own bookkeeping: every added
// edge must join two previously unconnected parts.
bool edges_form_forest(const std::vector<std::pair<int, int>>& edges, int D) {
    std::vector<int> root(static_cast<size_t>(D));
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](int x) {
        while (root[static_cast<size_t>(x)] != x) x = root[static_cast<size_t>(x)];
        return x;
    };
    for (const auto& [i, j] : edges) {
        const int ri = find(i), rj = find(j);
        if (ri == rj) return false;
        root[static_cast<size_t>(ri)] = rj;
    }
    return true;
}

}  // namespace

TEST_SUITE("step") {

TEST_CASE("two parts: the single ratio carries everything") {
    PlrMatrix Xp = tu::random_plr(15, 2, 3001);
    StepSelection sel = step_select(Xp, 1);
    REQUIRE(sel.ratios.size() == 1);
    CHECK(sel.ratios[0] == std::pair<int, int>(0, 1));
    CHECK(sel.columns[0] == 0);
    CHECK(sel.exvar_path[0] == doctest::Approx(100.0).epsilon(1e-8));
}

TEST_CASE("first pick maximizes single-column explained variance") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PlrMatrix Xp = tu::random_plr(30, 6, 3100 + seed);
        StepSelection sel = step_select(Xp, 1);

        int best_col = 0;
        double best = -1.0;
        for (int m = 0; m < Xp.M(); ++m) {
            const double v = exvar_of_subset(Xp, {m});
            if (v > best) {
                best = v;
                best_col = m;
            }
        }
        CHECK(sel.columns[0] == best_col);
        CHECK(sel.exvar_path[0] == doctest::Approx(best).epsilon(1e-10));
    }
}

TEST_CASE("selections stay acyclic and strictly improving") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int D = 4 + static_cast<int>(seed % 5);
        PlrMatrix Xp = tu::random_plr(40, D, 3200 + seed);
        StepSelection sel = step_select(Xp, D - 1);

        REQUIRE(static_cast<int>(sel.ratios.size()) == D - 1);
        CHECK(edges_form_forest(sel.ratios, D));
        for (size_t t = 1; t < sel.exvar_path.size(); ++t)
            CHECK(sel.exvar_path[t] > sel.exvar_path[t - 1]);
        CHECK(sel.exvar_path.back() == doctest::Approx(100.0).epsilon(1e-8));
    }
}

TEST_CASE("cumulative path values match the subset oracle") {
    PlrMatrix Xp = tu::random_plr(35, 6, 3301);
    StepSelection sel = step_select(Xp, 5);
    std::vector<int> prefix;
    for (size_t t = 0; t < sel.columns.size(); ++t) {
        prefix.push_back(sel.columns[t]);
        CHECK(sel.exvar_path[t] == doctest::Approx(exvar_of_subset(Xp, prefix)).epsilon(1e-10));
    }
}

TEST_CASE("ratios and columns describe the same selection") {
    PlrMatrix Xp = tu::random_plr(30, 7, 3401);
    StepSelection sel = step_select(Xp, 6);
    REQUIRE(sel.ratios.size() == sel.columns.size());
    for (size_t t = 0; t < sel.ratios.size(); ++t) {
        const auto [i, j] = sel.ratios[t];
        CHECK(i < j);
        CHECK(Xp.pair_index.column(i, j) == sel.columns[t]);
    }
}

TEST_CASE("a planted dominant contrast is picked first") {
    // Parts 2 and 4 swing together against everything else with far more
    // variability than any other contrast.
    const int n = 50, D = 6;
    std::mt19937_64 gen(3501);
    std::normal_distribution<double> small(0.0, 0.05);
    std::normal_distribution<double> big(0.0, 2.0);
    Eigen::MatrixXd vals(n, D);
    for (int i = 0; i < n; ++i) {
        const double swing = big(gen);
        for (int j = 0; j < D; ++j) vals(i, j) = std::exp(small(gen) + (j == 2 ? swing : 0.0) - (j == 4 ? swing : 0.0));
    }
    CompositionMatrix X = validate_composition(vals, default_part_names(D));
    PlrMatrix Xp = plr_expand(X, true);
    StepSelection sel = step_select(Xp, 1);
    CHECK(sel.ratios[0] == std::pair<int, int>(2, 4));
}

TEST_CASE("partial selections stop at the requested size") {
    PlrMatrix Xp = tu::random_plr(30, 8, 3601);
    StepSelection sel = step_select(Xp, 3);
    CHECK(sel.ratios.size() == 3);
    CHECK(sel.exvar_path.size() == 3);
}

TEST_CASE("bad requests are rejected") {
    PlrMatrix Xp = tu::random_plr(20, 5, 3701);
    CHECK_THROWS_AS(step_select(Xp, 0), Error);
    CHECK_THROWS_AS(step_select(Xp, 5), Error);
    CHECK_THROWS_AS(step_select(Xp, -1), Error);

    PlrMatrix raw = plr_expand(tu::random_composition(20, 5, 3701), false);
    CHECK_THROWS_AS(step_select(raw, 2), Error);

    CompositionMatrix flat;
    flat.values = Eigen::MatrixXd::Constant(10, 4, 3.0);
    flat.part_names = default_part_names(4);
    PlrMatrix zero = plr_expand(flat, true);
    CHECK_THROWS_AS(step_select(zero, 2), Error);
}

TEST_CASE("selection is deterministic") {
    PlrMatrix Xp = tu::random_plr(45, 7, 3801);
    StepSelection a = step_select(Xp, 6);
    StepSelection b = step_select(Xp, 6);
    CHECK(a.columns == b.columns);
    CHECK(a.exvar_path == b.exvar_path);
}

}  // TEST_SUITE
