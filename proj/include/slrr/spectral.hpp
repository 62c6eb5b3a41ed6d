#pragma once

#include <Eigen/Eigenvalues>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "slrr/linalg.hpp"
#include "slrr/rng.hpp"
#include "slrr/types.hpp"

namespace slrr {

struct SpectralConfig {
    int k = 1;
    std::uint64_t seed = 0;
    int kmeans_restarts = 20;
    int kmeans_max_iters = 300;
};

namespace detail {

struct KmeansRun {
    std::vector<int> assign; // 0-based
    double wcss = std::numeric_limits<double>::infinity();
};

inline int nearest_centroid(const Matrix& points, const Matrix& centroids, Eigen::Index i) {
    int best = 0;
    double best_d = (points.row(i) - centroids.row(0)).squaredNorm();
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
        const double d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

inline KmeansRun lloyd_once(const Matrix& points, int k, Rng& rng, int max_iters) {
    const Eigen::Index n = points.rows();
    Matrix centroids(k, points.cols());

    // k-means++ seeding
    std::vector<double> dist2(static_cast<size_t>(n), 0.0);
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = (points.row(i) - centroids.row(0)).squaredNorm();
            for (int p = 1; p < c; ++p)
                d = std::min(d, (points.row(i) - centroids.row(p)).squaredNorm());
            dist2[static_cast<size_t>(i)] = d;
            total += d;
        }
        if (total <= 0.0) {
            // all points coincide with chosen centroids; any choice works
            centroids.row(c) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
            continue;
        }
        double target = rng.uniform() * total;
        Eigen::Index pick = n - 1;
        for (Eigen::Index i = 0; i < n; ++i) {
            target -= dist2[static_cast<size_t>(i)];
            if (target <= 0.0) {
                pick = i;
                break;
            }
        }
        centroids.row(c) = points.row(pick);
    }

    KmeansRun run;
    run.assign.assign(static_cast<size_t>(n), -1);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int c = nearest_centroid(points, centroids, i);
            if (c != run.assign[static_cast<size_t>(i)]) {
                run.assign[static_cast<size_t>(i)] = c;
                changed = true;
            }
        }

        // empty cluster: re-seed from the point farthest from its centroid
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (int a : run.assign)
            ++counts[static_cast<size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0)
                continue;
            double worst = -1.0;
            Eigen::Index worst_i = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int a = run.assign[static_cast<size_t>(i)];
                if (counts[static_cast<size_t>(a)] <= 1)
                    continue;
                const double d = (points.row(i) - centroids.row(a)).squaredNorm();
                if (d > worst) {
                    worst = d;
                    worst_i = i;
                }
            }
            if (worst < 0.0)
                continue; // every remaining cluster is a singleton
            --counts[static_cast<size_t>(run.assign[static_cast<size_t>(worst_i)])];
            run.assign[static_cast<size_t>(worst_i)] = c;
            ++counts[static_cast<size_t>(c)];
            centroids.row(c) = points.row(worst_i);
            changed = true;
        }

        if (!changed)
            break;

        centroids.setZero();
        for (Eigen::Index i = 0; i < n; ++i)
            centroids.row(run.assign[static_cast<size_t>(i)]) += points.row(i);
        for (int c = 0; c < k; ++c)
            if (counts[static_cast<size_t>(c)] > 0)
                centroids.row(c) /= static_cast<double>(counts[static_cast<size_t>(c)]);
    }

    run.wcss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        run.wcss += (points.row(i) - centroids.row(run.assign[static_cast<size_t>(i)])).squaredNorm();
    return run;
}

} // namespace detail

/**
 * Seeded k-means with k-means++ initialization per restart and Lloyd
 * iterations; best of restarts by within-cluster sum of squares, ties broken
 * by lowest restart index. Rows of `points` are samples. Labels are 1..k.
 */
inline Labels kmeans(const Matrix& points, const SpectralConfig& cfg) {
    const Eigen::Index n = points.rows();
    if (cfg.k < 1 || cfg.k > n)
        throw std::invalid_argument("kmeans: k must be in [1, n]");
    if (cfg.kmeans_restarts < 1)
        throw std::invalid_argument("kmeans: restarts must be >= 1");

    Rng rng(cfg.seed);
    detail::KmeansRun best;
    for (int r = 0; r < cfg.kmeans_restarts; ++r) {
        detail::KmeansRun run = detail::lloyd_once(points, cfg.k, rng, cfg.kmeans_max_iters);
        if (run.wcss < best.wcss)
            best = std::move(run);
    }

    Labels labels(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        labels[static_cast<size_t>(i)] = best.assign[static_cast<size_t>(i)] + 1;
    return labels;
}

/**
 * Normalized-cuts spectral clustering (Ng-Jordan-Weiss variant): symmetric
 * normalized Laplacian L = I - D^{-1/2} W D^{-1/2} (zero-degree rows get zero
 * normalized rows), k eigenvectors of smallest eigenvalue, row-normalized
 * embedding, seeded k-means. Eigenvector sign ambiguity is removed by fixing
 * each vector's largest-magnitude entry positive.
 */
inline Labels ncuts(const Matrix& W, const SpectralConfig& cfg) {
    const Eigen::Index n = W.rows();
    if (W.cols() != n)
        throw std::invalid_argument("ncuts: affinity must be square");
    if (cfg.k < 1 || cfg.k > n)
        throw std::invalid_argument("ncuts: k must be in [1, n]");
    if (relative_asymmetry(W) > 1e-10)
        throw std::invalid_argument("ncuts: affinity must be symmetric");
    if (W.minCoeff() < 0.0)
        throw std::invalid_argument("ncuts: affinity must be nonnegative");
    if (W.maxCoeff() == 0.0)
        throw std::invalid_argument("ncuts: affinity is all zero");

    const Vector degree = W.rowwise().sum();
    Vector dinv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i)
        dinv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;

    Matrix L = -(dinv_sqrt.asDiagonal() * W * dinv_sqrt.asDiagonal());
    L.diagonal().array() += 1.0;

    Eigen::SelfAdjointEigenSolver<Matrix> es(L);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("ncuts: eigendecomposition failed");

    Matrix embedding = es.eigenvectors().leftCols(cfg.k); // ascending eigenvalues
    for (int c = 0; c < cfg.k; ++c) {
        Eigen::Index imax = 0;
        embedding.col(c).cwiseAbs().maxCoeff(&imax);
        if (embedding(imax, c) < 0.0)
            embedding.col(c) = -embedding.col(c);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0)
            embedding.row(i) /= norm;
    }

    return kmeans(embedding, cfg);
}

} // namespace slrr
