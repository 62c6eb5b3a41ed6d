#pragma once

#include <Eigen/QR>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "slrr/rng.hpp"
#include "slrr/types.hpp"

namespace slrr {

/// Synthetic union-of-subspaces description.
struct SynthSpec {
    int num_subspaces = 1;      // k
    int subspace_dim = 1;       // d
    int ambient_dim = 2;        // D
    int points_per_subspace = 1;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
};

struct SynthResult {
    Matrix data;   // ambient_dim x (k * points_per_subspace), samples as columns
    Labels labels; // generating subspace of each column, 1-based
};

namespace detail {

inline void validate(const SynthSpec& s) {
    if (s.num_subspaces < 1 || s.subspace_dim < 1 || s.ambient_dim < 1 || s.points_per_subspace < 1)
        throw std::invalid_argument("synth spec: counts must be positive");
    if (s.subspace_dim >= s.ambient_dim)
        throw std::invalid_argument("synth spec: subspace_dim must be < ambient_dim");
    if (s.noise_sigma < 0.0)
        throw std::invalid_argument("synth spec: noise_sigma must be nonnegative");
}

inline Matrix random_gaussian(int rows, int cols, Rng& rng) {
    Matrix G(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            G(i, j) = rng.normal();
    return G;
}

} // namespace detail

/**
 * Draw k subspaces with seeded orthonormal bases (QR of standard-normal
 * matrices) and standard-normal coefficients, plus isotropic Gaussian noise
 * of scale noise_sigma. Identical seed gives identical output.
 */
inline SynthResult generate_union_of_subspaces(const SynthSpec& spec) {
    detail::validate(spec);
    Rng rng(spec.seed);

    const int n = spec.num_subspaces * spec.points_per_subspace;
    SynthResult out;
    out.data.resize(spec.ambient_dim, n);
    out.labels.resize(static_cast<size_t>(n));

    for (int s = 0; s < spec.num_subspaces; ++s) {
        const Matrix G = detail::random_gaussian(spec.ambient_dim, spec.subspace_dim, rng);
        const Matrix basis =
            Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(spec.ambient_dim, spec.subspace_dim);
        const Matrix coeffs = detail::random_gaussian(spec.subspace_dim, spec.points_per_subspace, rng);
        Matrix block = basis * coeffs;
        if (spec.noise_sigma > 0.0)
            block += spec.noise_sigma * detail::random_gaussian(spec.ambient_dim, spec.points_per_subspace, rng);
        out.data.middleCols(static_cast<Eigen::Index>(s) * spec.points_per_subspace, spec.points_per_subspace) = block;
        for (int p = 0; p < spec.points_per_subspace; ++p)
            out.labels[static_cast<size_t>(s) * spec.points_per_subspace + static_cast<size_t>(p)] = s + 1;
    }
    return out;
}

/// Min-max scale all entries into [0,1]; constant matrices map to zero.
/// The corruption protocol below assumes this normalization.
inline Matrix scale_to_unit_interval(const Matrix& X) {
    if (X.size() == 0)
        return X;
    const double lo = X.minCoeff();
    const double hi = X.maxCoeff();
    if (hi <= lo)
        return Matrix::Zero(X.rows(), X.cols());
    return Matrix(((X.array() - lo) / (hi - lo)).matrix());
}

/**
 * Replace exactly round(ratio*m*n) uniformly chosen distinct entries with
 * independent uniform-[0,1] draws (round-half-up). Deterministic per seed.
 * The protocol is defined for matrices normalized to [0,1]; a warning is
 * emitted on stderr when entries fall outside.
 */
inline Matrix corrupt_entries(const Matrix& X, double ratio, std::uint64_t seed) {
    if (!(ratio >= 0.0 && ratio <= 1.0))
        throw std::invalid_argument("corruption ratio must be in [0,1]");
    if (X.size() > 0 && (X.minCoeff() < 0.0 || X.maxCoeff() > 1.0))
        std::cerr << "slrr: warning: corrupt_entries input has entries outside [0,1]; "
                     "the corruption protocol assumes normalized data\n";

    Matrix out = X;
    const std::uint64_t total = static_cast<std::uint64_t>(X.size());
    const std::uint64_t count = static_cast<std::uint64_t>(std::floor(ratio * static_cast<double>(total) + 0.5));
    if (count == 0)
        return out;

    Rng rng(seed);
    // Partial Fisher-Yates: the first `count` slots end up a uniform sample
    // of distinct positions.
    std::vector<std::uint64_t> positions(total);
    std::iota(positions.begin(), positions.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t j = i + rng.below(total - i);
        std::swap(positions[i], positions[j]);
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        const Eigen::Index pos = static_cast<Eigen::Index>(positions[i]);
        out(pos % X.rows(), pos / X.rows()) = rng.uniform();
    }
    return out;
}

} // namespace slrr
