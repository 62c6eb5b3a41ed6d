#pragma once

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slrr/linalg.hpp"
#include "slrr/representation.hpp"
#include "slrr/types.hpp"

namespace slrr {

/**
 * Skinny SVD factors of the representation Z = U S V^T restricted to the
 * retained singular triplets. For symmetric PSD Z, U = V up to sign and
 * M M^T reproduces Z within truncation error.
 */
struct SkinnyFactor {
    Matrix M;               // U S^{1/2}, n x r; rows are sample embeddings
    Matrix N;               // S^{1/2} V^T, r x n
    Vector singular_values; // retained, descending

    int rank() const { return static_cast<int>(singular_values.size()); }
    bool empty() const { return singular_values.size() == 0; }
};

/**
 * Retain all triplets with sigma > rel_tol * sigma_1. A zero matrix yields an
 * empty (flagged) factor. Z must be symmetric; singular directions carrying a
 * genuinely negative eigenvalue (below -10 eps sigma_1) raise a PSD
 * diagnostic, while tiny negatives are clamped to zero by dropping them
 * before the square root.
 */
inline SkinnyFactor skinny_svd(const Matrix& Z, double rel_tol = 1e-8) {
    if (Z.rows() != Z.cols())
        throw std::invalid_argument("skinny_svd: matrix must be square");
    if (relative_asymmetry(Z) > 1e-10)
        throw std::invalid_argument("skinny_svd: matrix is not symmetric");

    SkinnyFactor f;
    if (Z.size() == 0 || Z.cwiseAbs().maxCoeff() == 0.0) {
        f.M.resize(Z.rows(), 0);
        f.N.resize(0, Z.cols());
        f.singular_values.resize(0);
        return f;
    }

    Eigen::BDCSVD<Matrix> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector sv = svd.singularValues();
    const double sigma1 = sv(0);
    const double psd_floor = 10.0 * std::numeric_limits<double>::epsilon() * sigma1;

    int kept = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= rel_tol * sigma1)
            break;
        // A negative eigenvalue -e of symmetric Z shows up as sigma = e with
        // u_i = -v_i; alignment of the singular vector pair is the sign test.
        const double align = svd.matrixU().col(i).dot(svd.matrixV().col(i));
        if (align < 0.0) {
            if (sv(i) > psd_floor)
                throw std::domain_error("skinny_svd: matrix has a negative eigenvalue; "
                                        "expected a positive semidefinite representation");
            break; // tiny negative: clamp to zero by truncating here
        }
        ++kept;
    }

    const Vector root = sv.head(kept).cwiseSqrt();
    f.M = svd.matrixU().leftCols(kept) * root.asDiagonal();
    f.N = root.asDiagonal() * svd.matrixV().leftCols(kept).transpose();
    f.singular_values = sv.head(kept);
    return f;
}

enum class AffinitySide { RowsOfM, ColsOfN };

struct AffinityOptions {
    int alpha = 2;
    AffinitySide side = AffinitySide::RowsOfM;
    /// Cosine normalization per the affinity definition. The raw
    /// inner-product variant ((m_i^T m_j)^{2 alpha}, no [0,1] guarantee) is a
    /// debug path only.
    bool normalize = true;
};

namespace detail {

inline double even_power(double base, int alpha) {
    double sq = base * base;
    double acc = 1.0;
    for (int i = 0; i < alpha; ++i)
        acc *= sq;
    return acc;
}

} // namespace detail

/**
 * W_ij = (cos angle between embeddings i and j)^{2 alpha}. Entries lie in
 * [0,1], the diagonal is 1 for samples with nonzero embedding (0 otherwise),
 * and W is exactly symmetric: each pair is computed once.
 */
inline Matrix build_affinity(const SkinnyFactor& f, const AffinityOptions& opt) {
    if (opt.alpha < 1)
        throw std::invalid_argument("build_affinity: alpha must be a positive integer");

    // Both sides carry the same n embeddings; columns of N equal rows of M up
    // to per-direction signs, which the even exponent removes.
    const Matrix embed = opt.side == AffinitySide::RowsOfM ? Matrix(f.M) : Matrix(f.N.transpose());
    const Eigen::Index n = embed.rows();
    Matrix W = Matrix::Zero(n, n);
    if (embed.cols() == 0)
        return W;

    const Vector norms = embed.rowwise().norm();
    const double norm_floor = std::numeric_limits<double>::epsilon() * norms.maxCoeff();

    for (Eigen::Index i = 0; i < n; ++i) {
        if (norms(i) <= norm_floor)
            continue;
        W(i, i) = opt.normalize ? 1.0 : detail::even_power(embed.row(i).squaredNorm(), opt.alpha);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (norms(j) <= norm_floor)
                continue;
            double c = embed.row(i).dot(embed.row(j));
            if (opt.normalize) {
                c /= norms(i) * norms(j);
                c = std::clamp(c, -1.0, 1.0);
            }
            const double w = detail::even_power(c, opt.alpha);
            W(i, j) = w;
            W(j, i) = w;
        }
    }
    return W;
}

inline Matrix build_affinity(const SkinnyFactor& f, int alpha) {
    AffinityOptions opt;
    opt.alpha = alpha;
    return build_affinity(f, opt);
}

/// LRR-style |Z| + |Z^T| affinity, kept as a debug comparison path.
inline Matrix abs_symmetrized_affinity(const Matrix& Z) {
    return Z.cwiseAbs() + Z.transpose().cwiseAbs();
}

} // namespace slrr
