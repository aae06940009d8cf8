#include "codasplr/coda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "codasplr/linalg.hpp"

namespace codasplr {

PairIndex::PairIndex(int d) : D(d) {
    if (d < 2) throw Error(ErrorKind::TooFewParts, "a composition needs at least 2 parts");
    pairs.reserve(static_cast<size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
}

int PairIndex::column(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= D || j >= D)
        throw Error(ErrorKind::DimensionMismatch,
                    "pair (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") is not valid for D = " + std::to_string(D));
    if (i > j) std::swap(i, j);
    return i * D - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<std::string> default_part_names(int D) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(D));
    for (int p = 1; p <= D; ++p) names.push_back("x" + std::to_string(p));
    return names;
}

CompositionMatrix validate_composition(Eigen::MatrixXd raw, std::vector<std::string> part_names) {
    const Eigen::Index n = raw.rows();
    const Eigen::Index D = raw.cols();
    if (D < 2) throw Error(ErrorKind::TooFewParts, "got D = " + std::to_string(D) + ", need D >= 2");
    if (n < 1) throw Error(ErrorKind::DimensionMismatch, "composition matrix has no rows");
    if (static_cast<Eigen::Index>(part_names.size()) != D)
        throw Error(ErrorKind::DimensionMismatch,
                    std::to_string(part_names.size()) + " part names for " + std::to_string(D) +
                        " columns");

    std::set<std::string> seen;
    for (const auto& name : part_names)
        if (!seen.insert(name).second)
            throw Error(ErrorKind::DuplicatePartName, "part name '" + name + "' appears twice");

    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < D; ++j) {
            const double v = raw(i, j);
            if (!(v > 0.0) || !std::isfinite(v)) {
                std::ostringstream msg;
                msg << "entry at row " << i + 1 << ", part '" << part_names[static_cast<size_t>(j)]
                    << "' is " << v
                    << "; every entry must be a strictly positive finite number "
                       "(zeros are rejected, no imputation is performed)";
                throw Error(ErrorKind::NonPositiveEntry, msg.str());
            }
        }

    return CompositionMatrix{std::move(raw), std::move(part_names)};
}

PlrMatrix plr_expand(const CompositionMatrix& X, bool center) {
    PlrMatrix out;
    out.pair_index = PairIndex(static_cast<int>(X.D()));
    const int M = out.pair_index.size();
    const Eigen::Index n = X.n();

    // ln(x_i / x_j) computed from one log pass over the parts.
    const Eigen::MatrixXd logs = X.values.array().log().matrix();
    out.values.resize(n, M);
    for (int m = 0; m < M; ++m) {
        const auto [i, j] = out.pair_index.pairs[static_cast<size_t>(m)];
        out.values.col(m) = logs.col(i) - logs.col(j);
    }

    if (center) {
        out.column_means = out.values.colwise().mean();
        out.values.rowwise() -= out.column_means.transpose();
        out.centered = true;
    } else {
        out.column_means = Eigen::VectorXd::Zero(M);
        out.centered = false;
    }
    return out;
}

SbpSignMatrix make_sbp(const Eigen::MatrixXi& signs) {
    const int rows = static_cast<int>(signs.rows());
    const int D = static_cast<int>(signs.cols());
    if (D < 2 || rows != D - 1)
        throw Error(ErrorKind::InvalidSbp,
                    "sign matrix must be (D-1) x D, got " + std::to_string(rows) + " x " +
                        std::to_string(D));

    SbpSignMatrix out;
    out.signs = signs;
    out.r.resize(rows);
    out.s.resize(rows);
    for (int k = 0; k < rows; ++k) {
        int plus = 0, minus = 0;
        for (int p = 0; p < D; ++p) {
            const int v = signs(k, p);
            if (v == 1)
                ++plus;
            else if (v == -1)
                ++minus;
            else if (v != 0)
                throw Error(ErrorKind::InvalidSbp,
                            "entry at row " + std::to_string(k + 1) + ", column " +
                                std::to_string(p + 1) + " is " + std::to_string(v) +
                                "; only -1, 0, +1 are allowed");
        }
        if (plus < 1 || minus < 1)
            throw Error(ErrorKind::InvalidSbp, "row " + std::to_string(k + 1) +
                                                   " must contain at least one +1 and one -1");
        out.r(k) = plus;
        out.s(k) = minus;
    }

    // Each row must split exactly one group produced by the rows before it,
    // starting from the single group of all D parts.
    std::vector<std::vector<int>> active;
    {
        std::vector<int> all(static_cast<size_t>(D));
        for (int p = 0; p < D; ++p) all[static_cast<size_t>(p)] = p;
        active.push_back(std::move(all));
    }
    for (int k = 0; k < rows; ++k) {
        std::vector<int> support, plus_set, minus_set;
        for (int p = 0; p < D; ++p) {
            if (signs(k, p) != 0) support.push_back(p);
            if (signs(k, p) == 1) plus_set.push_back(p);
            if (signs(k, p) == -1) minus_set.push_back(p);
        }
        auto it = std::find(active.begin(), active.end(), support);
        if (it == active.end())
            throw Error(ErrorKind::InvalidSbp,
                        "row " + std::to_string(k + 1) +
                            " does not split a group produced by the preceding rows");
        active.erase(it);
        if (plus_set.size() > 1) active.push_back(std::move(plus_set));
        if (minus_set.size() > 1) active.push_back(std::move(minus_set));
    }

    return out;
}

ContrastMatrix sbp_to_contrast(const SbpSignMatrix& sbp) {
    const int D = sbp.D();
    const int K = D - 1;
    ContrastMatrix out;
    out.V = Eigen::MatrixXd::Zero(D, K);
    for (int k = 0; k < K; ++k) {
        const double rk = static_cast<double>(sbp.r(k));
        const double sk = static_cast<double>(sbp.s(k));
        const double plus_coef = std::sqrt(sk / (rk * (rk + sk)));
        const double minus_coef = -std::sqrt(rk / (sk * (rk + sk)));
        for (int p = 0; p < D; ++p) {
            if (sbp.signs(k, p) == 1)
                out.V(p, k) = plus_coef;
            else if (sbp.signs(k, p) == -1)
                out.V(p, k) = minus_coef;
        }
    }
    return out;
}

CompositionMatrix balances_to_composition(const Eigen::MatrixXd& balances,
                                          const ContrastMatrix& contrast,
                                          std::vector<std::string> part_names) {
    const Eigen::Index D = contrast.D();
    if (balances.cols() != D - 1)
        throw Error(ErrorKind::DimensionMismatch,
                    "balance matrix has " + std::to_string(balances.cols()) +
                        " columns, contrast expects " + std::to_string(D - 1));
    if (balances.rows() < 1)
        throw Error(ErrorKind::DimensionMismatch, "balance matrix has no rows");
    if (part_names.empty()) part_names = default_part_names(static_cast<int>(D));
    if (static_cast<Eigen::Index>(part_names.size()) != D)
        throw Error(ErrorKind::DimensionMismatch,
                    std::to_string(part_names.size()) + " part names for D = " + std::to_string(D));

    Eigen::MatrixXd values(balances.rows(), D);
    for (Eigen::Index row = 0; row < balances.rows(); ++row) {
        const Eigen::VectorXd y = (contrast.V * balances.row(row).transpose()).array().exp();
        values.row(row) = (y / y.sum()).transpose();
    }
    return validate_composition(std::move(values), std::move(part_names));
}

Eigen::MatrixXd composition_to_balances(const CompositionMatrix& X, const ContrastMatrix& contrast) {
    if (X.D() != contrast.D())
        throw Error(ErrorKind::DimensionMismatch,
                    "composition has D = " + std::to_string(X.D()) + ", contrast expects D = " +
                        std::to_string(contrast.D()));
    return X.values.array().log().matrix() * contrast.V;
}

Eigen::VectorXd closure(const Eigen::VectorXd& x) {
    if (x.size() == 0) throw Error(ErrorKind::DimensionMismatch, "empty vector");
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x(i) > 0.0) || !std::isfinite(x(i)))
            throw Error(ErrorKind::NonPositiveEntry,
                        "component " + std::to_string(i + 1) + " is not strictly positive");
    return x / x.sum();
}

static void require_centered(const PlrMatrix& Xp, const char* op) {
    if (!Xp.centered)
        throw Error(ErrorKind::NotCentered, std::string(op) + " requires a centered PLR matrix");
}

double total_variance(const PlrMatrix& Xp) {
    require_centered(Xp, "total_variance");
    if (Xp.n() < 2)
        throw Error(ErrorKind::DegenerateSample,
                    "sample variance needs n >= 2, got n = " + std::to_string(Xp.n()));
    return Xp.values.squaredNorm() / static_cast<double>(Xp.n() - 1);
}

Eigen::VectorXd column_variances(const PlrMatrix& Xp) {
    require_centered(Xp, "column_variances");
    if (Xp.n() < 2)
        throw Error(ErrorKind::DegenerateSample,
                    "sample variance needs n >= 2, got n = " + std::to_string(Xp.n()));
    return Xp.values.colwise().squaredNorm() / static_cast<double>(Xp.n() - 1);
}

double exvar_of_subset(const PlrMatrix& Xp, const std::vector<int>& columns) {
    require_centered(Xp, "exvar_of_subset");
    if (columns.empty()) throw Error(ErrorKind::EmptySubset, "subset of PLR columns is empty");
    const int M = Xp.M();
    for (int c : columns)
        if (c < 0 || c >= M)
            throw Error(ErrorKind::DimensionMismatch,
                        "column id " + std::to_string(c) + " outside [0, " + std::to_string(M) + ")");
    if (Xp.values.squaredNorm() == 0.0)
        throw Error(ErrorKind::DegenerateSample, "PLR matrix has zero total variability");

    Eigen::MatrixXd S(Xp.n(), static_cast<Eigen::Index>(columns.size()));
    for (size_t c = 0; c < columns.size(); ++c)
        S.col(static_cast<Eigen::Index>(c)) = Xp.values.col(columns[c]);
    return detail::projected_exvar_pct(Xp.values, S);
}

std::string plr_label(const std::string& numerator, const std::string& denominator) {
    auto escape = [](const std::string& name) {
        std::string out;
        out.reserve(name.size());
        for (char ch : name) {
            if (ch == '/') out += '\\';
            out += ch;
        }
        return out;
    };
    return "ln(" + escape(numerator) + "/" + escape(denominator) + ")";
}

}  // namespace codasplr
