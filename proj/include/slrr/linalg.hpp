#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <limits>

#include "slrr/types.hpp"

namespace slrr {

inline Vector singular_values(const Matrix& M) {
    return Eigen::BDCSVD<Matrix>(M).singularValues();
}

/// Rank tolerance: max(m,n) * eps * sigma_1.
inline double rank_tolerance(const Matrix& M, double sigma1) {
    const double dim = static_cast<double>(std::max(M.rows(), M.cols()));
    return dim * std::numeric_limits<double>::epsilon() * sigma1;
}

/// Numerical rank: count of singular values above tol (default tol as above).
inline int numerical_rank(const Matrix& M, double tol = -1.0) {
    if (M.size() == 0)
        return 0;
    const Vector sv = singular_values(M);
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    if (tol < 0.0)
        tol = rank_tolerance(M, sv(0));
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol)
            ++r;
    return r;
}

/// max_ij |M_ij - M_ji| relative to max_ij |M_ij|; 0 for empty matrices.
inline double relative_asymmetry(const Matrix& M) {
    if (M.size() == 0)
        return 0.0;
    const double scale = M.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        return 0.0;
    return (M - M.transpose()).cwiseAbs().maxCoeff() / scale;
}

} // namespace slrr
