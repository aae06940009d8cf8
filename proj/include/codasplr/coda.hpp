#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "codasplr/error.hpp"

namespace codasplr {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Canonical enumeration of the M = D*(D-1)/2 unordered part pairs of a
/// D-part composition. Pairs are ordered lexicographically as (i, j) with
/// i < j, 0-based, so for D = 3 the order is (0,1), (0,2), (1,2). The lower
/// index is always the ratio numerator.
struct PairIndex {
    int D = 0;
    std::vector<std::pair<int, int>> pairs;

    PairIndex() = default;
    explicit PairIndex(int d);

    int size() const { return static_cast<int>(pairs.size()); }

    /// Column position of the unordered pair {i, j}. Order of arguments does
    /// not matter; i == j or out-of-range indices throw DimensionMismatch.
    int column(int i, int j) const;

    const std::pair<int, int>& pair_at(int col) const { return pairs.at(static_cast<size_t>(col)); }
};

/// Strictly positive n x D data matrix with one named column per part.
/// Rows are observations. Construct through validate_composition so the
/// positivity and naming invariants hold.
struct CompositionMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> part_names;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index D() const { return values.cols(); }
};

/// n x M matrix of pairwise logratios ln(x_i / x_j), one column per canonical
/// pair. When centered is true each column has had its mean removed and
/// column_means holds the removed values.
struct PlrMatrix {
    Eigen::MatrixXd values;
    PairIndex pair_index;
    Eigen::VectorXd column_means;
    bool centered = false;

    Eigen::Index n() const { return values.rows(); }
    int M() const { return static_cast<int>(values.cols()); }
};

/// Sequential binary partition of D parts encoded as a (D-1) x D sign matrix
/// over {-1, 0, +1}. Row k splits one previously produced group into the +1
/// parts (r[k] of them) and the -1 parts (s[k] of them); the first row splits
/// all D parts. Construct through make_sbp.
struct SbpSignMatrix {
    Eigen::MatrixXi signs;
    Eigen::VectorXi r;
    Eigen::VectorXi s;

    int D() const { return static_cast<int>(signs.cols()); }
};

/// D x (D-1) balance contrast matrix with orthonormal columns, each summing
/// to zero. Column k carries +sqrt(s_k / (r_k (r_k + s_k))) on the +1 parts
/// of partition row k and -sqrt(r_k / (s_k (r_k + s_k))) on the -1 parts.
struct ContrastMatrix {
    Eigen::MatrixXd V;

    Eigen::Index D() const { return V.rows(); }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Checks raw data against the composition invariants and assembles a
/// CompositionMatrix. Throws NonPositiveEntry (with row and column context)
/// for entries that are not strictly positive finite numbers,
/// DuplicatePartName, TooFewParts (D < 2), and DimensionMismatch when the
/// name count disagrees with the column count or the matrix has no rows.
CompositionMatrix validate_composition(Eigen::MatrixXd raw, std::vector<std::string> part_names);

/// "x1", "x2", ..., "xD".
std::vector<std::string> default_part_names(int D);

/// Expands a composition into its full pairwise-logratio matrix, optionally
/// centering each column. Column order follows PairIndex.
PlrMatrix plr_expand(const CompositionMatrix& X, bool center = true);

/// Validates a {-1, 0, +1} sign matrix as a sequential binary partition.
/// Throws InvalidSbp when the shape is not (D-1) x D, a row lacks a +1 or a
/// -1, an entry is outside {-1, 0, +1}, or a row's nonzero support does not
/// exactly match one group produced by the preceding rows.
SbpSignMatrix make_sbp(const Eigen::MatrixXi& signs);

/// Builds the balance contrast matrix of a valid partition.
ContrastMatrix sbp_to_contrast(const SbpSignMatrix& sbp);

/// Maps an n x (D-1) matrix of balance coordinates back to compositions:
/// each row b becomes closure(exp(V b)). Throws DimensionMismatch when the
/// balance dimension does not match V, or when part_names (if nonempty) has
/// the wrong length.
CompositionMatrix balances_to_composition(const Eigen::MatrixXd& balances,
                                          const ContrastMatrix& contrast,
                                          std::vector<std::string> part_names = {});

/// Forward balance transform: row-wise b = V^T ln(x). Scale invariant, so it
/// accepts closed and unclosed compositions alike and inverts
/// balances_to_composition exactly up to rounding.
Eigen::MatrixXd composition_to_balances(const CompositionMatrix& X, const ContrastMatrix& contrast);

/// Rescales a strictly positive vector to unit sum. Throws NonPositiveEntry.
Eigen::VectorXd closure(const Eigen::VectorXd& x);

/// Sum of sample variances (n-1 denominator) over all PLR columns, equal to
/// the trace of the sample covariance of Xp. Requires a centered matrix with
/// n >= 2 (NotCentered / DegenerateSample).
double total_variance(const PlrMatrix& Xp);

/// Per-column sample variances (n-1 denominator) of a centered PLR matrix.
Eigen::VectorXd column_variances(const PlrMatrix& Xp);

/// Percentage of total variability captured by orthogonal projection of Xp
/// onto the span of the chosen PLR columns:
///   100 * (1 - ||Xp - P_S Xp||_F^2 / ||Xp||_F^2).
/// Monotone non-decreasing under subset inclusion, 100 for the full set.
/// Throws EmptySubset, DimensionMismatch for bad column ids, NotCentered,
/// and DegenerateSample when Xp has zero norm.
double exvar_of_subset(const PlrMatrix& Xp, const std::vector<int>& columns);

/// "ln(<numerator>/<denominator>)" display label for a pair, with any '/'
/// inside a part name escaped as "\/".
std::string plr_label(const std::string& numerator, const std::string& denominator);

}  // namespace codasplr
