#include <catch2/catch_amalgamated.hpp>

#include "slrr/affinity.hpp"
#include "slrr/representation.hpp"
#include "slrr/rng.hpp"
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

Representation representation_of_union(int k, int d, int D, int points, std::uint64_t seed, double lambda) {
    SynthSpec spec;
    spec.num_subspaces = k;
    spec.subspace_dim = d;
    spec.ambient_dim = D;
    spec.points_per_subspace = points;
    spec.seed = seed;
    return solve(generate_union_of_subspaces(spec).data, lambda);
}

} // namespace

TEST_CASE("factorization reproduces the input and keeps its rank", "[affinity]") {
    const Representation rep = representation_of_union(3, 2, 20, 8, 1, 0.05);
    const SkinnyFactor f = skinny_svd(rep.Z);

    REQUIRE(f.rank() == 6); // k * d retained directions
    REQUIRE((f.M * f.N - rep.Z).cwiseAbs().maxCoeff() < 1e-10);
    // for a symmetric PSD input the two factors carry the same embedding
    REQUIRE((f.M * f.M.transpose() - rep.Z).cwiseAbs().maxCoeff() < 1e-10);
    for (Eigen::Index i = 1; i < f.singular_values.size(); ++i)
        REQUIRE(f.singular_values(i) <= f.singular_values(i - 1));
}

TEST_CASE("zero matrices produce an empty factor; asymmetry and indefiniteness are rejected", "[affinity]") {
    const SkinnyFactor f = skinny_svd(Matrix::Zero(5, 5));
    REQUIRE(f.empty());
    REQUIRE(f.M.rows() == 5);
    REQUIRE(f.M.cols() == 0);

    Matrix asym = Matrix::Zero(4, 4);
    asym(0, 1) = 1.0;
    REQUIRE_THROWS_AS(skinny_svd(asym), std::invalid_argument);
    REQUIRE_THROWS_AS(skinny_svd(Matrix::Zero(3, 4)), std::invalid_argument);

    Matrix indefinite = Matrix::Identity(4, 4);
    indefinite(2, 2) = -0.5;
    REQUIRE_THROWS_AS(skinny_svd(indefinite), std::domain_error);
}

TEST_CASE("relative threshold drops the trailing directions", "[affinity]") {
    Matrix Z = Matrix::Zero(6, 6);
    Z.diagonal() << 1.0, 0.5, 0.1, 1e-5, 1e-12, 0.0;
    REQUIRE(skinny_svd(Z).rank() == 4);        // default 1e-8 relative cut
    REQUIRE(skinny_svd(Z, 1e-3).rank() == 3);
}

TEST_CASE("affinity entries are cosines to an even power", "[affinity]") {
    const Representation rep = representation_of_union(2, 2, 12, 6, 2, 0.1);
    const SkinnyFactor f = skinny_svd(rep.Z);
    const Matrix W = build_affinity(f, 2);

    REQUIRE(W.rows() == 12);
    REQUIRE((W - W.transpose()).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(W.minCoeff() >= 0.0);
    REQUIRE(W.maxCoeff() <= 1.0);
    for (Eigen::Index i = 0; i < W.rows(); ++i)
        REQUIRE(W(i, i) == 1.0);

    // spot-check one off-diagonal entry against the definition
    const double c = f.M.row(0).dot(f.M.row(5)) / (f.M.row(0).norm() * f.M.row(5).norm());
    REQUIRE(W(0, 5) == Catch::Approx(std::pow(c, 4)).margin(1e-14));
}

TEST_CASE("both factor sides give the same affinity", "[affinity]") {
    const Representation rep = representation_of_union(3, 3, 25, 7, 3, 0.02);
    const SkinnyFactor f = skinny_svd(rep.Z);
    AffinityOptions opt;
    opt.alpha = 2;
    opt.side = AffinitySide::RowsOfM;
    const Matrix Wm = build_affinity(f, opt);
    opt.side = AffinitySide::ColsOfN;
    const Matrix Wn = build_affinity(f, opt);
    REQUIRE((Wm - Wn).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a larger exponent sharpens off-diagonal contrast", "[affinity]") {
    const Representation rep = representation_of_union(2, 3, 15, 10, 4, 0.05);
    const SkinnyFactor f = skinny_svd(rep.Z);
    const Matrix W1 = build_affinity(f, 1);
    const Matrix W2 = build_affinity(f, 2);
    // |cos| <= 1, so powers only shrink entries
    REQUIRE(((W1 - W2).array() >= -1e-15).all());
    REQUIRE((W1 - W2).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("independent subspaces give near block-diagonal affinity", "[affinity]") {
    // two 2-dim subspaces spanned by disjoint coordinate axes
    const int per = 10;
    Matrix X = Matrix::Zero(8, 2 * per);
    Rng rng(5);
    for (int j = 0; j < per; ++j) {
        X(0, j) = rng.normal();
        X(1, j) = rng.normal();
        X(2, per + j) = rng.normal();
        X(3, per + j) = rng.normal();
    }
    const Representation rep = solve(X, 1e-2);
    const Matrix W = build_affinity(skinny_svd(rep.Z), 2);

    double cross = 0.0, within = 0.0;
    for (int i = 0; i < per; ++i)
        for (int j = 0; j < per; ++j) {
            within += W(i, j) + W(per + i, per + j);
            cross += W(i, per + j);
        }
    REQUIRE(cross < 1e-16 * within);
}

TEST_CASE("samples with empty embeddings get fully zero rows", "[affinity]") {
    // one all-zero sample: its representation row/column vanishes
    Matrix X = random_matrix(6, 9, 6);
    X.col(4).setZero();
    const Matrix W = build_affinity(skinny_svd(solve(X, 0.1).Z), 2);
    REQUIRE(W.row(4).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(W.col(4).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(W(4, 4) == 0.0);
    for (Eigen::Index i = 0; i < 9; ++i)
        if (i != 4)
            REQUIRE(W(i, i) == 1.0);
}

TEST_CASE("exponent validation and the absolute-value debug path", "[affinity]") {
    const Representation rep = representation_of_union(2, 2, 10, 5, 7, 0.1);
    const SkinnyFactor f = skinny_svd(rep.Z);
    REQUIRE_THROWS_AS(build_affinity(f, 0), std::invalid_argument);

    const Matrix W = abs_symmetrized_affinity(rep.Z);
    REQUIRE((W - W.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    REQUIRE(W.minCoeff() >= 0.0);
}
