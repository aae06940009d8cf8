#include "codasplr/spca.hpp"

#include <cmath>
#include <limits>

#include "codasplr/linalg.hpp"

namespace codasplr {

namespace {

void check_config(const PlrMatrix& Xp, const SpcaConfig& cfg) {
    if (!Xp.centered) throw Error(ErrorKind::NotCentered, "fit requires a centered PLR matrix");
    const int M = Xp.M();
    const Eigen::Index n = Xp.n();
    const int k_cap = static_cast<int>(std::min<Eigen::Index>(n - 1, M));
    if (cfg.k < 1 || cfg.k > k_cap)
        throw Error(ErrorKind::BadConfig, "k = " + std::to_string(cfg.k) +
                                              " outside [1, min(n-1, M)] = [1, " +
                                              std::to_string(k_cap) + "]");
    if (!(cfg.alpha >= 0.0) || !std::isfinite(cfg.alpha))
        throw Error(ErrorKind::BadConfig, "alpha must be a finite value >= 0");
    if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta))
        throw Error(ErrorKind::BadConfig, "beta must be a finite value >= 0");
    if (cfg.max_iter < 1) throw Error(ErrorKind::BadConfig, "max_iter must be >= 1");
    if (!(cfg.tol > 0.0)) throw Error(ErrorKind::BadConfig, "tol must be > 0");
}

// Largest eigenvalue of a symmetric PSD matrix by power iteration
// (relative tolerance 1e-9, at most 1000 iterations), inflated by a small
// safety margin so that 1/L never exceeds the true inverse Lipschitz step.
double lipschitz_bound(const Eigen::MatrixXd& G) {
    const Eigen::Index m = G.rows();
    Eigen::VectorXd v(m);
    for (Eigen::Index i = 0; i < m; ++i)
        v(i) = 1.0 + static_cast<double>(i) / static_cast<double>(2 * m);
    v.normalize();

    double rayleigh = 0.0;
    for (int it = 0; it < 1000; ++it) {
        const Eigen::VectorXd w = G * v;
        const double next = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        if (it > 0 && std::abs(next - rayleigh) <= 1e-9 * std::max(std::abs(next), 1e-300)) {
            rayleigh = next;
            break;
        }
        rayleigh = next;
    }
    return rayleigh * (1.0 + 1e-3);
}

double objective_impl(const Eigen::MatrixXd& X, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& H, double alpha, double beta) {
    const Eigen::MatrixXd R = X - (X * B) * H.transpose();
    return 0.5 * R.squaredNorm() + alpha * B.cwiseAbs().sum() + 0.5 * beta * B.squaredNorm();
}

Eigen::MatrixXd update_h_from_product(const Eigen::MatrixXd& GB, bool* rank_deficient) {
    const Eigen::Index k = GB.cols();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(GB, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0 ? sv(0) : 0.0) *
                          static_cast<double>(std::max(GB.rows(), GB.cols())) *
                          std::numeric_limits<double>::epsilon();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    if (rank_deficient != nullptr) *rank_deficient = rank < k;
    // Thin U already carries an orthonormal completion for the null
    // directions, so U W^T stays orthonormal even at reduced rank.
    return svd.matrixU() * svd.matrixV().transpose();
}

void prox_sweep(Eigen::MatrixXd& B, double step, double alpha, double beta) {
    const double thresh = step * alpha;
    const double scale = 1.0 / (1.0 + step * beta);
    for (Eigen::Index j = 0; j < B.cols(); ++j)
        for (Eigen::Index i = 0; i < B.rows(); ++i) {
            const double z = B(i, j);
            const double mag = std::abs(z) - thresh;
            B(i, j) = mag > 0.0 ? std::copysign(mag * scale, z) : 0.0;
        }
}

std::vector<int> collect_nonzero_rows(const Eigen::MatrixXd& B) {
    std::vector<int> rows;
    for (Eigen::Index i = 0; i < B.rows(); ++i)
        if ((B.row(i).array() != 0.0).any()) rows.push_back(static_cast<int>(i));
    return rows;
}

SparsePcaFit finalize(const PlrMatrix& Xp, SparsePcaFit fit) {
    fit.Z = Xp.values * fit.B;
    fit.nonzero_rows = collect_nonzero_rows(fit.B);
    fit.exvar_pct = explained_variance_k(Xp, fit);
    return fit;
}

SparsePcaFit run_solver(const PlrMatrix& Xp, const SpcaConfig& cfg, Eigen::MatrixXd B,
                        Eigen::MatrixXd H) {
    const Eigen::MatrixXd& X = Xp.values;
    SparsePcaFit out;

    if (X.squaredNorm() == 0.0) {
        out.B = Eigen::MatrixXd::Zero(Xp.M(), cfg.k);
        out.H = update_h_from_product(out.B, &out.h_rank_deficient);
        out.objective_trace = {0.0};
        out.converged = true;
        return finalize(Xp, std::move(out));
    }

    const Eigen::MatrixXd G = X.transpose() * X;
    const double L = lipschitz_bound(G);
    const double step = 1.0 / L;

    double f = objective_impl(X, B, H, cfg.alpha, cfg.beta);
    out.objective_trace.push_back(f);
    out.converged = false;

    for (int it = 0; it < cfg.max_iter; ++it) {
        Eigen::MatrixXd B_next = B - step * (G * (B - H));
        prox_sweep(B_next, step, cfg.alpha, cfg.beta);
        bool deficient = false;
        Eigen::MatrixXd H_next = update_h_from_product(G * B_next, &deficient);
        const double f_next = objective_impl(X, B_next, H_next, cfg.alpha, cfg.beta);

        // A joint step that fails to descend means the iterate sits at the
        // numerical noise floor; keep the current point and stop.
        if (!(f_next <= f)) {
            out.converged = true;
            break;
        }

        B.swap(B_next);
        H.swap(H_next);
        out.h_rank_deficient = out.h_rank_deficient || deficient;
        out.objective_trace.push_back(f_next);
        const double drop = f - f_next;
        f = f_next;
        if (drop <= cfg.tol * std::max(1.0, std::abs(f))) {
            out.converged = true;
            break;
        }
    }

    out.iterations = static_cast<int>(out.objective_trace.size()) - 1;
    out.B = std::move(B);
    out.H = std::move(H);
    return finalize(Xp, std::move(out));
}

// Top-k right singular vectors with a deterministic sign convention: each
// column is flipped so its entry of largest magnitude (lowest index on ties)
// is positive. The configured seed stays unused because no ambiguity is left.
Eigen::MatrixXd dense_init(const Eigen::MatrixXd& X, int k) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
    Eigen::MatrixXd V = svd.matrixV().leftCols(k);
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        Eigen::Index at = 0;
        V.col(j).cwiseAbs().maxCoeff(&at);
        if (V(at, j) < 0.0) V.col(j) = -V.col(j);
    }
    return V;
}

}  // namespace

double objective(const PlrMatrix& Xp, const Eigen::MatrixXd& B, const Eigen::MatrixXd& H,
                 double alpha, double beta) {
    if (B.rows() != Xp.M() || H.rows() != Xp.M() || B.cols() != H.cols())
        throw Error(ErrorKind::DimensionMismatch,
                    "loadings and basis must both be M x k for this PLR matrix");
    return objective_impl(Xp.values, B, H, alpha, beta);
}

double prox_elastic_net(double z, double step, double alpha, double beta) {
    const double mag = std::abs(z) - step * alpha;
    if (mag <= 0.0) return 0.0;
    return std::copysign(mag / (1.0 + step * beta), z);
}

Eigen::MatrixXd update_h(const PlrMatrix& Xp, const Eigen::MatrixXd& B, bool* rank_deficient) {
    if (B.rows() != Xp.M())
        throw Error(ErrorKind::DimensionMismatch, "loadings must have one row per PLR column");
    const Eigen::MatrixXd GB = Xp.values.transpose() * (Xp.values * B);
    return update_h_from_product(GB, rank_deficient);
}

SparsePcaFit fit(const PlrMatrix& Xp, const SpcaConfig& cfg) {
    check_config(Xp, cfg);
    if (Xp.values.squaredNorm() == 0.0)
        return run_solver(Xp, cfg, Eigen::MatrixXd::Zero(Xp.M(), cfg.k),
                          Eigen::MatrixXd::Identity(Xp.M(), cfg.k));
    const Eigen::MatrixXd V = dense_init(Xp.values, cfg.k);
    return run_solver(Xp, cfg, V, V);
}

SparsePcaFit fit_warm(const PlrMatrix& Xp, const SpcaConfig& cfg, const Eigen::MatrixXd& B0,
                      const Eigen::MatrixXd& H0) {
    check_config(Xp, cfg);
    if (B0.rows() != Xp.M() || B0.cols() != cfg.k || H0.rows() != Xp.M() || H0.cols() != cfg.k)
        throw Error(ErrorKind::DimensionMismatch, "warm start shapes must match M x k");
    return run_solver(Xp, cfg, B0, H0);
}

double explained_variance_k(const PlrMatrix& Xp, const SparsePcaFit& fitted) {
    if (!Xp.centered)
        throw Error(ErrorKind::NotCentered, "explained_variance_k requires a centered PLR matrix");
    if (fitted.Z.rows() != Xp.n())
        throw Error(ErrorKind::DimensionMismatch, "scores row count must match the PLR matrix");
    if (Xp.values.squaredNorm() == 0.0 || fitted.Z.squaredNorm() == 0.0) return 0.0;
    return detail::projected_exvar_pct(Xp.values, fitted.Z);
}

double find_alpha_max(const PlrMatrix& Xp, const SpcaConfig& cfg) {
    check_config(Xp, cfg);
    const Eigen::MatrixXd& X = Xp.values;
    if (X.squaredNorm() == 0.0) return 0.0;

    SpcaConfig probe = cfg;
    auto all_zero_at = [&](double alpha) {
        probe.alpha = alpha;
        return fit(Xp, probe).nonzero_rows.empty();
    };

    const Eigen::MatrixXd G = X.transpose() * X;
    const double start = G.cwiseAbs().maxCoeff() / static_cast<double>(Xp.n());

    double lo = 0.0;  // fit at 0 is dense whenever the data has any variability
    double hi = start;
    int doublings = 0;
    while (!all_zero_at(hi)) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200)
            throw Error(ErrorKind::NonPositiveAlphaMax,
                        "full-sparsity search failed to bracket an upper alpha");
    }

    while (hi - lo > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (all_zero_at(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

AlphaGrid make_grid(double alpha_max, int points) {
    if (!(alpha_max > 0.0) || !std::isfinite(alpha_max))
        throw Error(ErrorKind::NonPositiveAlphaMax,
                    "alpha_max must be a positive finite value, got " + std::to_string(alpha_max));
    if (points < 2) throw Error(ErrorKind::BadConfig, "grid needs at least 2 points");

    AlphaGrid grid;
    grid.alpha_max = alpha_max;
    grid.values.resize(static_cast<size_t>(points));
    grid.values[0] = 0.0;
    const double denom = static_cast<double>(points - 1);
    for (int i = 1; i < points; ++i) {
        const double t = static_cast<double>(i) / denom;
        grid.values[static_cast<size_t>(i)] = alpha_max * std::pow(10.0, -4.0 * (1.0 - t));
    }
    return grid;
}

}  // namespace codasplr
