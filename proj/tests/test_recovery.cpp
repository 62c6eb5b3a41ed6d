#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "slrr/linalg.hpp"
#include "slrr/recovery.hpp"
#include "slrr/synth.hpp"

using namespace slrr;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix M(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            M(i, j) = rng.normal();
    return M;
}

} // namespace

TEST_CASE("rank-r projection reaches the optimal tail energy", "[recovery]") {
    const Matrix X = random_matrix(20, 35, 7);
    for (int r : {1, 3, 7, 15}) {
        const Recovery rec = pca_recover(X, r);
        REQUIRE(rec.method == RecoveryMethod::Pca);
        REQUIRE(numerical_rank(rec.A) == r);
        REQUIRE(rec.P->cols() == r);
        // Eckart-Young: no rank-r matrix does better than the singular tail.
        const double err = (X - rec.A).squaredNorm();
        REQUIRE(err == Catch::Approx(oracle::rank_r_tail_energy(X, r)).margin(1e-9));
    }
}

TEST_CASE("projection basis is orthonormal and idempotent on its range", "[recovery]") {
    const Matrix X = random_matrix(15, 25, 8);
    const Recovery rec = pca_recover(X, 5);
    const Matrix& P = *rec.P;
    REQUIRE((P.transpose() * P - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE((P * (P.transpose() * rec.A) - rec.A).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("centered projection removes the row mean before truncating", "[recovery]") {
    Matrix X = random_matrix(10, 30, 9);
    X.rowwise() += Eigen::RowVectorXd::Constant(30, 50.0); // large common offset
    const Recovery plain = pca_recover(X, 2);
    const Recovery centered = pca_recover(X, 2, true);
    // without centering one component is wasted on the offset
    const double err_plain = (X - plain.A).squaredNorm();
    const double err_centered = (X - centered.A).squaredNorm();
    REQUIRE(err_centered < err_plain);
}

TEST_CASE("rank bounds are validated", "[recovery]") {
    const Matrix X = random_matrix(6, 9, 1);
    REQUIRE_THROWS_AS(pca_recover(X, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(pca_recover(X, 7), std::invalid_argument);
    REQUIRE_THROWS_AS(random_project(X, 0, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(random_project(X, 7, 0), std::invalid_argument);
}

TEST_CASE("random projection is seeded, shaped r x n, and norm-preserving on average", "[recovery]") {
    const Matrix X = random_matrix(40, 60, 2);
    const Recovery a = random_project(X, 12, 5);
    const Recovery b = random_project(X, 12, 5);
    const Recovery c = random_project(X, 12, 6);
    REQUIRE(a.A.rows() == 12);
    REQUIRE(a.A.cols() == 60);
    REQUIRE((a.A - b.A).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE((a.A - c.A).cwiseAbs().maxCoeff() > 0.0);

    // E||P^T x||^2 = ||x||^2 under N(0, 1/r) entries; allow generous slack
    const double ratio = a.A.squaredNorm() / X.squaredNorm();
    REQUIRE(ratio > 0.5);
    REQUIRE(ratio < 1.5);

    const Recovery id = random_project(X, 40, 0, true);
    REQUIRE((id.A - X).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE_THROWS_AS(random_project(X, 12, 0, true), std::invalid_argument);
}

TEST_CASE("identity recovery passes the data through untouched", "[recovery]") {
    const Matrix X = random_matrix(5, 8, 3);
    const Recovery rec = identity_recover(X);
    REQUIRE(rec.method == RecoveryMethod::Identity);
    REQUIRE((rec.A - X).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE_FALSE(rec.P.has_value());
}

TEST_CASE("sparse-plus-low-rank separation recovers a planted matrix", "[recovery][rpca]") {
    // plant rank 4 in 40x50, spike 5% of the entries
    const Matrix L = random_matrix(40, 4, 10) * random_matrix(4, 50, 11);
    Matrix X = L;
    Rng rng(12);
    const int spikes = static_cast<int>(0.05 * 40 * 50);
    for (int s = 0; s < spikes; ++s) {
        const auto pos = rng.below(40 * 50);
        X(static_cast<Eigen::Index>(pos % 40), static_cast<Eigen::Index>(pos / 40)) +=
            (rng.uniform() < 0.5 ? -1.0 : 1.0) * (5.0 + 10.0 * rng.uniform());
    }

    const Recovery rec = rpca_recover(X);
    REQUIRE(rec.converged);
    REQUIRE(rec.iterations <= 500);
    REQUIRE((rec.A - L).norm() / L.norm() < 1e-3);
    REQUIRE(((rec.A + *rec.E) - X).norm() / X.norm() < 1e-6);
}

TEST_CASE("separation on a clean low-rank matrix returns it nearly unchanged", "[recovery][rpca]") {
    const Matrix L = random_matrix(30, 3, 20) * random_matrix(3, 30, 21);
    const Recovery rec = rpca_recover(L);
    REQUIRE(rec.converged);
    REQUIRE((rec.A - L).norm() / L.norm() < 1e-4);
}

TEST_CASE("zero input short-circuits; bad settings are rejected", "[recovery][rpca]") {
    const Matrix Z0 = Matrix::Zero(8, 10);
    const Recovery rec = rpca_recover(Z0);
    REQUIRE(rec.converged);
    REQUIRE(rec.A.cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(rec.E->cwiseAbs().maxCoeff() == 0.0);

    RpcaConfig bad;
    bad.tolerance = 0.0;
    REQUIRE_THROWS_AS(rpca_recover(Z0, bad), std::invalid_argument);
    bad = RpcaConfig{};
    bad.max_iterations = 0;
    REQUIRE_THROWS_AS(rpca_recover(Z0, bad), std::invalid_argument);
    bad = RpcaConfig{};
    bad.mu_growth = 1.0;
    REQUIRE_THROWS_AS(rpca_recover(Z0, bad), std::invalid_argument);
}

TEST_CASE("iteration cap reports non-convergence without throwing", "[recovery][rpca]") {
    const Matrix X = random_matrix(20, 25, 30);
    RpcaConfig cfg;
    cfg.max_iterations = 1;
    const Recovery rec = rpca_recover(X, cfg);
    REQUIRE_FALSE(rec.converged);
    REQUIRE(rec.iterations == 1);
    REQUIRE(rec.residual > cfg.tolerance);
}
