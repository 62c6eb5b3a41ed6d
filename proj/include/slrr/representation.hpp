#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <stdexcept>

#include "slrr/linalg.hpp"
#include "slrr/recovery.hpp"
#include "slrr/types.hpp"

namespace slrr {

/**
 * The symmetric low-rank representation Z = (A^T A + lambda I)^{-1} A^T A,
 * the exact stationary point of
 *
 *     min_Z  1/2 ||A - A Z||_F^2 + (lambda/2) trace(Z^T Z).
 *
 * Z is symmetric positive semidefinite with eigenvalues
 * sigma_i^2 / (sigma_i^2 + lambda) for the singular values sigma_i of A, so
 * rank(Z) <= rank(A) and every eigenvalue lies in [0, 1).
 */
struct Representation {
    Matrix Z;
    double lambda = 0.0;
    int source_rank = 0;    // numerical rank of A
    Vector eigen_spectrum;  // eigenvalues of Z, descending, length n
};

/**
 * Closed-form solve via the economy SVD A = U S V^T:
 * Z = V diag(s_i^2/(s_i^2+lambda)) V^T, assembled as a rank update so the
 * result is exactly symmetric. Avoids forming A^T A (condition-number
 * squaring) and yields the spectrum for free.
 */
inline Representation solve(const Matrix& A, double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("slrr::solve: lambda must be positive");
    if (A.size() == 0)
        throw std::invalid_argument("slrr::solve: empty matrix");

    const Eigen::Index n = A.cols();
    Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinV);
    const Vector sv = svd.singularValues();

    Representation rep;
    rep.lambda = lambda;
    rep.eigen_spectrum = Vector::Zero(n);

    const double tol = sv.size() > 0 ? rank_tolerance(A, sv(0)) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol)
            ++rank;
    rep.source_rank = rank;

    Vector gains(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double s2 = sv(i) * sv(i);
        gains(i) = s2 / (s2 + lambda);
        rep.eigen_spectrum(i) = gains(i);
    }

    const Matrix B = svd.matrixV() * gains.cwiseSqrt().asDiagonal();
    rep.Z = Matrix::Zero(n, n);
    rep.Z.selfadjointView<Eigen::Lower>().rankUpdate(B);
    rep.Z.triangularView<Eigen::StrictlyUpper>() = rep.Z.transpose();
    return rep;
}

inline Representation solve(const Recovery& recovery, double lambda) {
    return solve(recovery.A, lambda);
}

/// Direct route through the normal equations, kept as a cross-check of the
/// SVD path: Z = (A^T A + lambda I)^{-1} A^T A via SPD factorization.
inline Matrix solve_normal_equations(const Matrix& A, double lambda) {
    if (lambda <= 0.0)
        throw std::invalid_argument("slrr::solve_normal_equations: lambda must be positive");
    const Eigen::Index n = A.cols();
    const Matrix gram = A.transpose() * A;
    return (gram + lambda * Matrix::Identity(n, n)).llt().solve(gram);
}

/// 1/2 ||A - A Z||_F^2 + (lambda/2) trace(Z^T Z). The 1/2 data-fit factor
/// makes the closed form above the exact minimizer.
inline double objective(const Matrix& A, const Matrix& Z, double lambda) {
    if (A.cols() != Z.rows() || Z.rows() != Z.cols())
        throw std::invalid_argument("slrr::objective: dimension mismatch");
    const double fit = (A - A * Z).squaredNorm();
    return 0.5 * fit + 0.5 * lambda * Z.squaredNorm();
}

/// Eigenvalues of a symmetric matrix in nonincreasing order. Throws when the
/// input is asymmetric beyond 1e-10 relative.
inline Vector eigen_spectrum(const Matrix& Z) {
    if (Z.rows() != Z.cols())
        throw std::invalid_argument("eigen_spectrum: matrix must be square");
    if (relative_asymmetry(Z) > 1e-10)
        throw std::invalid_argument("eigen_spectrum: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(Z, Eigen::EigenvaluesOnly);
    return es.eigenvalues().reverse();
}

} // namespace slrr
