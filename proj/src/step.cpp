#include "codasplr/step.hpp"

#include <Eigen/QR>
#include <numeric>

namespace codasplr {

namespace {

// Union-find over part ids; merging the endpoints of every accepted pair
// makes "would close a cycle" the same test as "already connected".
struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int size) : parent(static_cast<size_t>(size)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    bool merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<size_t>(a)] = b;
        return true;
    }
};

}  // namespace

StepSelection step_select(const PlrMatrix& Xp, int max_ratios) {
    if (!Xp.centered)
        throw Error(ErrorKind::NotCentered, "step_select requires a centered PLR matrix");
    const int D = Xp.pair_index.D;
    const int M = Xp.M();
    const Eigen::Index n = Xp.n();
    if (max_ratios < 1 || max_ratios > D - 1)
        throw Error(ErrorKind::BadConfig, "max_ratios = " + std::to_string(max_ratios) +
                                              " outside [1, D - 1 = " + std::to_string(D - 1) + "]");
    const double total = Xp.values.squaredNorm();
    if (total == 0.0)
        throw Error(ErrorKind::DegenerateSample, "PLR matrix has zero total variability");

    StepSelection out;
    UnionFind uf(D);
    Eigen::MatrixXd basis(n, max_ratios);  // orthonormal basis of the selected span
    int t = 0;

    while (t < max_ratios) {
        const auto Q = basis.leftCols(t);
        int best_col = -1;
        double best_gain = -1.0;

        for (int m = 0; m < M; ++m) {
            const auto [i, j] = Xp.pair_index.pair_at(m);
            if (uf.find(i) == uf.find(j)) continue;
            Eigen::VectorXd resid = Xp.values.col(m);
            if (t > 0) {
                resid -= Q * (Q.transpose() * resid);
                resid -= Q * (Q.transpose() * resid);  // second pass controls drift
            }
            const double rn2 = resid.squaredNorm();
            if (rn2 <= Xp.values.col(m).squaredNorm() * 1e-24) continue;
            const double gain = (Xp.values.transpose() * (resid / std::sqrt(rn2))).squaredNorm();
            if (gain > best_gain) {
                best_gain = gain;
                best_col = m;
            }
        }
        if (best_col < 0) break;

        const auto [i, j] = Xp.pair_index.pair_at(best_col);
        uf.merge(i, j);
        out.columns.push_back(best_col);
        out.ratios.emplace_back(i, j);

        Eigen::VectorXd resid = Xp.values.col(best_col);
        if (t > 0) {
            resid -= Q * (Q.transpose() * resid);
            resid -= Q * (Q.transpose() * resid);
        }
        basis.col(t) = resid / resid.norm();
        ++t;

        out.exvar_path.push_back(exvar_of_subset(Xp, out.columns));
    }

    return out;
}

}  // namespace codasplr
