#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "codasplr/coda.hpp"

namespace codasplr {

// ---------------------------------------------------------------------------
// Sparse PCA on the full pairwise-logratio expansion, solved by alternating a
// proximal-gradient sweep on the loadings B with an exact orthogonal
// Procrustes update of the auxiliary basis H:
//
//   minimize  0.5 * ||X - X B H^T||_F^2 + alpha * ||B||_1 + 0.5 * beta * ||B||_2^2
//   subject to H^T H = I.
//
// The reconstruction term is kept unnormalized, so alpha values are tied to
// this objective and are not comparable across differently scaled data; the
// alpha grid is therefore always derived from the data at hand (see
// find_alpha_max / make_grid).
// ---------------------------------------------------------------------------

struct SpcaConfig {
    int k = 2;               ///< number of components, 1 <= k <= min(n - 1, M)
    double alpha = 0.0;      ///< l1 weight, >= 0
    double beta = 1e-4;      ///< l2 weight, >= 0
    int max_iter = 1000;     ///< outer iteration cap
    double tol = 1e-5;       ///< relative objective-change stopping threshold
    std::uint64_t seed = 0;  ///< reserved; initialization is deterministic
};

struct SparsePcaFit {
    Eigen::MatrixXd B;  ///< M x k sparse loadings; zeros are exact zeros
    Eigen::MatrixXd H;  ///< M x k orthonormal auxiliary basis
    Eigen::MatrixXd Z;  ///< n x k scores, exactly Xp * B
    std::vector<double> objective_trace;  ///< initial value plus one per accepted iteration
    double exvar_pct = 0.0;               ///< explained_variance_k of the fit
    std::vector<int> nonzero_rows;        ///< ids of PLR rows with any nonzero loading
    bool converged = false;               ///< false when the iteration cap was hit
    int iterations = 0;                   ///< accepted outer iterations
    bool h_rank_deficient = false;        ///< some H update needed an arbitrary orthonormal completion
};

/// Regularization path grid: values[0] is exactly 0, the rest rise over four
/// decades to alpha_max with a constant ratio between consecutive values.
struct AlphaGrid {
    std::vector<double> values;
    double alpha_max = 0.0;

    int size() const { return static_cast<int>(values.size()); }
};

/// Objective value at (B, H). H is taken as-is; no orthonormality check.
double objective(const PlrMatrix& Xp, const Eigen::MatrixXd& B, const Eigen::MatrixXd& H,
                 double alpha, double beta);

/// Scalar elastic-net proximal operator:
///   sign(z) * max(|z| - step * alpha, 0) / (1 + step * beta).
/// Soft-thresholded values are exact zeros.
double prox_elastic_net(double z, double step, double alpha, double beta);

/// Orthogonal Procrustes update: H = U W^T where (Xp^T Xp) B = U S W^T is the
/// thin SVD. When that product has rank below k the basis is completed with
/// arbitrary orthonormal columns and *rank_deficient (if given) is set.
/// For k = 1 this reduces to H = (Xp^T Xp) b / ||(Xp^T Xp) b||.
Eigen::MatrixXd update_h(const PlrMatrix& Xp, const Eigen::MatrixXd& B,
                         bool* rank_deficient = nullptr);

/// Runs the alternating solver from the deterministic dense initialization
/// (top-k right singular vectors of Xp, sign-fixed). Requires a centered
/// PLR matrix (NotCentered) and a valid config (BadConfig). A fit that hits
/// max_iter reports converged = false rather than throwing.
SparsePcaFit fit(const PlrMatrix& Xp, const SpcaConfig& cfg);

/// Same solver, warm-started from the given loadings and basis (shapes must
/// match M x k; H0 should carry orthonormal columns, e.g. from a previous
/// fit at a nearby alpha).
SparsePcaFit fit_warm(const PlrMatrix& Xp, const SpcaConfig& cfg, const Eigen::MatrixXd& B0,
                      const Eigen::MatrixXd& H0);

/// Percentage of total variability captured by projecting Xp onto the span
/// of the fitted scores Z. All-zero scores give 0.
double explained_variance_k(const PlrMatrix& Xp, const SparsePcaFit& fitted);

/// Smallest alpha (within 1% relative bisection tolerance) whose fit returns
/// all-zero loadings. Doubling search upward from the largest entry magnitude
/// of (1/n) Xp^T Xp, then bisection; the returned value is always verified.
/// Data with zero total variability yields 0.
double find_alpha_max(const PlrMatrix& Xp, const SpcaConfig& cfg);

/// Builds the path grid: values[0] = 0 and, for i = 1..points-1,
/// values[i] = alpha_max * 10^(-4 * (1 - i/(points-1))). Throws
/// NonPositiveAlphaMax for alpha_max <= 0 and BadConfig for points < 2.
AlphaGrid make_grid(double alpha_max, int points = 51);

}  // namespace codasplr
