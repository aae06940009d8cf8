#pragma once

#include <Eigen/Dense>

namespace codasplr::detail {

// Orthonormal basis of the column span of A, rank-truncated with the usual
// sigma_max * max(dim) * eps cutoff. Returns an n x r matrix (r may be 0).
inline Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& A) {
    if (A.cols() == 0 || A.rows() == 0) return Eigen::MatrixXd(A.rows(), 0);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) <= 0.0) return Eigen::MatrixXd(A.rows(), 0);
    const double cutoff = sv(0) * static_cast<double>(std::max(A.rows(), A.cols())) *
                          std::numeric_limits<double>::epsilon();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return svd.matrixU().leftCols(r);
}

// Percentage of the squared Frobenius norm of X captured by orthogonal
// projection onto the column span of S. X must have nonzero norm.
inline double projected_exvar_pct(const Eigen::MatrixXd& X, const Eigen::MatrixXd& S) {
    const Eigen::MatrixXd Q = orthonormal_basis(S);
    if (Q.cols() == 0) return 0.0;
    return 100.0 * (Q.transpose() * X).squaredNorm() / X.squaredNorm();
}

}  // namespace codasplr::detail
