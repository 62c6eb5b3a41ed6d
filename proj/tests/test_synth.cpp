#include <catch2/catch_amalgamated.hpp>

#include "slrr/linalg.hpp"
#include "slrr/rng.hpp"
#include "slrr/synth.hpp"

using namespace slrr;

TEST_CASE("seeded rng streams are reproducible and land in range", "[rng]") {
    Rng a(42), b(42), c(43);
    bool identical = true, differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.uniform();
        identical = identical && (x == b.uniform());
        differs = differs || (x != c.uniform());
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
    REQUIRE(identical);
    REQUIRE(differs);

    Rng d(7);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(d.below(13) < 13);
}

TEST_CASE("normal draws have roughly standard moments", "[rng]") {
    Rng rng(1);
    const int n = 20000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.05);
    REQUIRE(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("generator shapes, labels, and determinism", "[synth]") {
    SynthSpec spec;
    spec.num_subspaces = 3;
    spec.subspace_dim = 2;
    spec.ambient_dim = 10;
    spec.points_per_subspace = 5;
    spec.seed = 11;

    const SynthResult a = generate_union_of_subspaces(spec);
    const SynthResult b = generate_union_of_subspaces(spec);
    REQUIRE(a.data.rows() == 10);
    REQUIRE(a.data.cols() == 15);
    REQUIRE(a.labels.size() == 15);
    REQUIRE(a.labels.front() == 1);
    REQUIRE(a.labels.back() == 3);
    REQUIRE((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);

    spec.seed = 12;
    const SynthResult c = generate_union_of_subspaces(spec);
    REQUIRE((a.data - c.data).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("noiseless data has rank k*d; noise fills the spectrum", "[synth]") {
    SynthSpec spec;
    spec.num_subspaces = 4;
    spec.subspace_dim = 3;
    spec.ambient_dim = 30;
    spec.points_per_subspace = 10;
    spec.seed = 5;
    REQUIRE(numerical_rank(generate_union_of_subspaces(spec).data) == 12);

    spec.noise_sigma = 0.1;
    REQUIRE(numerical_rank(generate_union_of_subspaces(spec).data) == 30);
}

TEST_CASE("spec validation rejects degenerate inputs", "[synth]") {
    SynthSpec spec;
    spec.num_subspaces = 2;
    spec.subspace_dim = 4;
    spec.ambient_dim = 4; // must exceed the subspace dimension
    spec.points_per_subspace = 3;
    REQUIRE_THROWS_AS(generate_union_of_subspaces(spec), std::invalid_argument);

    spec.ambient_dim = 8;
    spec.points_per_subspace = 0;
    REQUIRE_THROWS_AS(generate_union_of_subspaces(spec), std::invalid_argument);

    spec.points_per_subspace = 3;
    spec.noise_sigma = -0.5;
    REQUIRE_THROWS_AS(generate_union_of_subspaces(spec), std::invalid_argument);
}

TEST_CASE("min-max scaling maps onto [0,1] and flattens constants", "[synth]") {
    Matrix M(2, 3);
    M << -2.0, 0.0, 6.0, 1.0, -1.0, 3.0;
    const Matrix S = scale_to_unit_interval(M);
    REQUIRE(S.minCoeff() == 0.0);
    REQUIRE(S.maxCoeff() == 1.0);
    REQUIRE(S(0, 1) == Catch::Approx(0.25)); // 0 in [-2, 6]

    REQUIRE(scale_to_unit_interval(Matrix::Constant(3, 3, 4.2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("corruption replaces exactly the rounded count of entries", "[synth]") {
    SynthSpec spec;
    spec.num_subspaces = 2;
    spec.subspace_dim = 2;
    spec.ambient_dim = 9;
    spec.points_per_subspace = 10; // 9 x 20 = 180 entries
    spec.seed = 3;
    const Matrix X = scale_to_unit_interval(generate_union_of_subspaces(spec).data);

    SECTION("counts for assorted ratios, round half up") {
        for (const auto& [ratio, want] : {std::pair{0.1, 18}, {0.2, 36}, {0.25, 45}, {1.0, 180}, {0.125, 23}}) {
            const Matrix C = corrupt_entries(X, ratio, 99);
            int differing = 0;
            for (Eigen::Index i = 0; i < X.size(); ++i)
                if (X(i) != C(i))
                    ++differing;
            REQUIRE(differing == want);
            if (ratio > 0.0) {
                REQUIRE(C.minCoeff() >= 0.0);
                REQUIRE(C.maxCoeff() <= 1.0);
            }
        }
    }
    SECTION("zero ratio is the identity") {
        REQUIRE((corrupt_entries(X, 0.0, 99) - X).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("same seed, same corruption; different seed, different pattern") {
        const Matrix a = corrupt_entries(X, 0.2, 1);
        REQUIRE((a - corrupt_entries(X, 0.2, 1)).cwiseAbs().maxCoeff() == 0.0);
        REQUIRE((a - corrupt_entries(X, 0.2, 2)).cwiseAbs().maxCoeff() > 0.0);
    }
    SECTION("ratios outside [0,1] are rejected") {
        REQUIRE_THROWS_AS(corrupt_entries(X, -0.1, 0), std::invalid_argument);
        REQUIRE_THROWS_AS(corrupt_entries(X, 1.5, 0), std::invalid_argument);
    }
}
