#pragma once

#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "slrr/linalg.hpp"
#include "slrr/rng.hpp"
#include "slrr/synth.hpp"
#include "slrr/types.hpp"

namespace slrr {

enum class RecoveryMethod { Pca, Rpca, RandomProjection, Identity };

inline const char* to_string(RecoveryMethod m) {
    switch (m) {
    case RecoveryMethod::Pca: return "pca";
    case RecoveryMethod::Rpca: return "rpca";
    case RecoveryMethod::RandomProjection: return "random-projection";
    case RecoveryMethod::Identity: return "identity";
    }
    return "?";
}

/**
 * Result of a low-rank recovery step: the alternative low-rank matrix A that
 * replaces the raw data in the representation solve.
 *
 * A is m x n for pca/rpca/identity and r x n for random projection.
 */
struct Recovery {
    RecoveryMethod method = RecoveryMethod::Identity;
    Matrix A;
    std::optional<Matrix> P;          // m x r projection (pca, random projection)
    std::optional<Matrix> E;          // m x n sparse error (rpca)
    std::optional<int> target_rank;   // requested r where applicable

    // rpca convergence metadata
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
    int svt_retained = -1;            // singular values kept by the final thresholding
};

/// Inexact-ALM principal component pursuit settings. Negative sentinels are
/// resolved from the data: lambda -> 1/sqrt(max(m,n)), mu_initial ->
/// 1.25/sigma_1(X), mu_max -> 1e7 * mu_initial.
struct RpcaConfig {
    double lambda = -1.0;
    double tolerance = 1e-7;
    int max_iterations = 500;
    double mu_initial = -1.0;
    double mu_growth = 1.5;
    double mu_max = -1.0;
};

/// Projection onto the span of the top-r left singular vectors: A = P P^T X.
/// No mean centering by default; `center` subtracts the row mean first (the
/// projection is applied to the centered matrix and the mean is added back).
inline Recovery pca_recover(const Matrix& X, int r, bool center = false) {
    if (r < 1 || r > std::min(X.rows(), X.cols()))
        throw std::invalid_argument("pca_recover: r must be in [1, min(m,n)]");

    Vector mean;
    Matrix Xc = X;
    if (center) {
        mean = X.rowwise().mean();
        Xc.colwise() -= mean;
    }

    Eigen::BDCSVD<Matrix> svd(Xc, Eigen::ComputeThinU);
    Recovery rec;
    rec.method = RecoveryMethod::Pca;
    rec.P = svd.matrixU().leftCols(r);
    rec.A = *rec.P * (rec.P->transpose() * Xc);
    if (center)
        rec.A.colwise() += mean;
    rec.target_rank = r;
    return rec;
}

namespace detail {

inline Matrix soft_threshold(const Matrix& M, double tau) {
    return M.unaryExpr([tau](double v) {
        const double a = std::abs(v) - tau;
        return a > 0.0 ? (v > 0.0 ? a : -a) : 0.0;
    });
}

} // namespace detail

/**
 * Robust PCA by inexact augmented Lagrange multipliers:
 * min ||A||_* + lambda ||E||_1  s.t.  X = A + E.
 *
 * Alternates singular-value thresholding on A (threshold 1/mu) and entrywise
 * soft thresholding on E (threshold lambda/mu), with dual update
 * Y <- Y + mu (X - A - E) and mu <- min(mu * growth, mu_max). Stops when
 * ||X - A - E||_F / ||X||_F <= tolerance. Non-convergence within
 * max_iterations is reported through the converged flag, not as a failure.
 */
inline Recovery rpca_recover(const Matrix& X, RpcaConfig cfg = {}) {
    if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1.0))
        throw std::invalid_argument("rpca: tolerance must be in (0,1)");
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("rpca: max_iterations must be >= 1");
    if (cfg.mu_growth <= 1.0)
        throw std::invalid_argument("rpca: mu_growth must be > 1");

    Recovery rec;
    rec.method = RecoveryMethod::Rpca;

    const double x_norm = X.norm();
    if (x_norm == 0.0) {
        rec.A = Matrix::Zero(X.rows(), X.cols());
        rec.E = Matrix::Zero(X.rows(), X.cols());
        rec.converged = true;
        rec.svt_retained = 0;
        return rec;
    }

    const double lambda =
        cfg.lambda > 0.0 ? cfg.lambda : 1.0 / std::sqrt(static_cast<double>(std::max(X.rows(), X.cols())));
    const double sigma1 = singular_values(X)(0);
    double mu = cfg.mu_initial > 0.0 ? cfg.mu_initial : 1.25 / sigma1;
    const double mu_max = cfg.mu_max > 0.0 ? cfg.mu_max : 1e7 * mu;

    // Dual ascent start of Lin et al.: Y = X / max(sigma_1, ||X||_inf / lambda).
    Matrix Y = X / std::max(sigma1, X.cwiseAbs().maxCoeff() / lambda);
    Matrix A = Matrix::Zero(X.rows(), X.cols());
    Matrix E = Matrix::Zero(X.rows(), X.cols());

    rec.converged = false;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        Eigen::BDCSVD<Matrix> svd(X - E + Y / mu, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vector sv = svd.singularValues();
        int kept = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1.0 / mu)
                ++kept;
        if (kept == 0) {
            A.setZero();
        } else {
            const Vector shrunk = sv.head(kept).array() - 1.0 / mu;
            A.noalias() = svd.matrixU().leftCols(kept) * shrunk.asDiagonal() *
                          svd.matrixV().leftCols(kept).transpose();
        }
        rec.svt_retained = kept;

        E = detail::soft_threshold(X - A + Y / mu, lambda / mu);

        const Matrix R = X - A - E;
        Y += mu * R;
        mu = std::min(mu * cfg.mu_growth, mu_max);

        rec.iterations = iter;
        rec.residual = R.norm() / x_norm;
        if (rec.residual <= cfg.tolerance) {
            rec.converged = true;
            break;
        }
    }

    rec.A = std::move(A);
    rec.E = std::move(E);
    return rec;
}

/// A = P^T X with P m x r of i.i.d. N(0, 1/r) entries (seeded). The 1/r
/// variance keeps expected column norms. `debug_identity` forces P = I when
/// r == m so the projection can be bypassed in tests.
inline Recovery random_project(const Matrix& X, int r, std::uint64_t seed, bool debug_identity = false) {
    if (r < 1 || r > X.rows())
        throw std::invalid_argument("random_project: r must be in [1, m]");

    Recovery rec;
    rec.method = RecoveryMethod::RandomProjection;
    rec.target_rank = r;
    if (debug_identity) {
        if (r != X.rows())
            throw std::invalid_argument("random_project: identity debug requires r == m");
        rec.P = Matrix::Identity(X.rows(), r);
    } else {
        Rng rng(seed);
        Matrix P(X.rows(), r);
        const double scale = 1.0 / std::sqrt(static_cast<double>(r));
        for (int j = 0; j < r; ++j)
            for (Eigen::Index i = 0; i < X.rows(); ++i)
                P(i, j) = scale * rng.normal();
        rec.P = std::move(P);
    }
    rec.A = rec.P->transpose() * X;
    return rec;
}

/// A = X. Used when the data is already (near) low-rank, e.g. clean
/// trajectory matrices.
inline Recovery identity_recover(const Matrix& X) {
    Recovery rec;
    rec.method = RecoveryMethod::Identity;
    rec.A = X;
    return rec;
}

} // namespace slrr
