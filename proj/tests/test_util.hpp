#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "codasplr/coda.hpp"

namespace tu {

/// Strictly positive composition with a mild per-part scale gradient so the
/// PLR covariance has a healthy, well-separated spectrum.
inline codasplr::CompositionMatrix random_composition(int n, int D, std::uint64_t seed,
                                                      double spread = 0.5) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, spread);
    codasplr::CompositionMatrix X;
    X.values.resize(n, D);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < D; ++j) X.values(i, j) = std::exp(normal(gen) * (1.0 + 0.35 * j));
    X.part_names = codasplr::default_part_names(D);
    return codasplr::validate_composition(X.values, X.part_names);
}

inline codasplr::PlrMatrix random_plr(int n, int D, std::uint64_t seed, double spread = 0.5) {
    return codasplr::plr_expand(random_composition(n, D, seed, spread), true);
}

/// Random sequential binary partition built by recursive splitting,
/// independent of the library's own partition validation.
inline codasplr::SbpSignMatrix random_sbp(int D, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Eigen::MatrixXi signs = Eigen::MatrixXi::Zero(D - 1, D);
    std::vector<std::vector<int>> groups;
    std::vector<int> all(static_cast<size_t>(D));
    for (int i = 0; i < D; ++i) all[static_cast<size_t>(i)] = i;
    groups.push_back(all);
    int row = 0;
    while (!groups.empty()) {
        std::vector<int> g = groups.back();
        groups.pop_back();
        if (g.size() < 2) continue;
        std::uniform_int_distribution<size_t> cut(1, g.size() - 1);
        std::shuffle(g.begin(), g.end(), gen);
        const size_t c = cut(gen);
        std::vector<int> plus(g.begin(), g.begin() + static_cast<long>(c));
        std::vector<int> minus(g.begin() + static_cast<long>(c), g.end());
        for (int p : plus) signs(row, p) = 1;
        for (int m : minus) signs(row, m) = -1;
        ++row;
        groups.push_back(plus);
        groups.push_back(minus);
    }
    return codasplr::make_sbp(signs);
}

}  // namespace tu
