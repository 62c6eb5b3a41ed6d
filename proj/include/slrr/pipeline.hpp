#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "slrr/affinity.hpp"
#include "slrr/eval.hpp"
#include "slrr/recovery.hpp"
#include "slrr/representation.hpp"
#include "slrr/spectral.hpp"
#include "slrr/types.hpp"

namespace slrr {

/**
 * Settings for one end-to-end run: recovery -> solve -> skinny SVD ->
 * affinity -> NCuts.
 */
struct PipelineConfig {
    RecoveryMethod recovery = RecoveryMethod::Identity;
    double lambda = 1e-2;
    int alpha = 2;
    std::string rank_expr;      // "", "120", "10n"/"10k" (multiples of k)
    int k = 1;
    std::uint64_t seed = 0;
    bool affine_ones = false;   // append a constant-ones row to A before solving
    bool center_pca = false;
    RpcaConfig rpca;
    int kmeans_restarts = 20;
    int kmeans_max_iters = 300;
};

/// Resolve a rank expression: a bare integer, or "<int>n"/"<int>k" meaning a
/// multiple of the cluster count. Empty means unset (0).
inline int resolve_rank(const std::string& expr, int k) {
    if (expr.empty())
        return 0;
    size_t pos = 0;
    long value = 0;
    try {
        value = std::stol(expr, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rank expression: '" + expr + "'");
    }
    if (pos < expr.size()) {
        const std::string suffix = expr.substr(pos);
        if (suffix == "n" || suffix == "k")
            value *= k;
        else
            throw std::invalid_argument("bad rank expression: '" + expr + "'");
    }
    if (value < 1)
        throw std::invalid_argument("rank expression must resolve to a positive integer: '" + expr + "'");
    return static_cast<int>(value);
}

struct PipelineResult {
    Recovery recovery;
    Representation representation;
    SkinnyFactor factor;
    Matrix W;
    Labels labels;
    std::map<std::string, double> stage_seconds;
    std::optional<double> error; // set when ground truth was given
};

namespace detail {

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}
    template <typename F>
    auto time(const std::string& stage, F&& f) -> decltype(f()) {
        const auto start = std::chrono::steady_clock::now();
        auto result = f();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        sink_[stage] = elapsed.count();
        return result;
    }

private:
    std::map<std::string, double>& sink_;
};

} // namespace detail

/**
 * Run the full clustering pipeline on X (samples as columns). Throws the
 * failing stage's exception with the stage name prefixed.
 */
inline PipelineResult run_pipeline(const Matrix& X, const PipelineConfig& cfg, const Labels* truth = nullptr) {
    if (cfg.k < 1 || cfg.k > X.cols())
        throw std::invalid_argument("pipeline: k must be in [1, n]");
    if (truth && static_cast<Eigen::Index>(truth->size()) != X.cols())
        throw std::invalid_argument("pipeline: ground-truth length does not match sample count");

    PipelineResult result;
    detail::StageTimer timer(result.stage_seconds);
    const int rank = resolve_rank(cfg.rank_expr, cfg.k);

    auto guarded = [](const char* stage, auto&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string(stage) + ": " + e.what());
        }
    };

    result.recovery = timer.time("recovery", [&] {
        return guarded("recovery", [&] {
            switch (cfg.recovery) {
            case RecoveryMethod::Pca:
                if (rank < 1)
                    throw std::invalid_argument("pca recovery requires a target rank");
                return pca_recover(X, rank, cfg.center_pca);
            case RecoveryMethod::Rpca:
                return rpca_recover(X, cfg.rpca);
            case RecoveryMethod::RandomProjection:
                if (rank < 1)
                    throw std::invalid_argument("random projection requires a target rank");
                return random_project(X, rank, cfg.seed);
            case RecoveryMethod::Identity:
                return identity_recover(X);
            }
            throw std::invalid_argument("unknown recovery method");
        });
    });

    result.representation = timer.time("solve", [&] {
        return guarded("solve", [&] {
            Matrix A = result.recovery.A;
            if (cfg.affine_ones) {
                A.conservativeResize(A.rows() + 1, Eigen::NoChange);
                A.row(A.rows() - 1).setOnes();
            }
            return solve(A, cfg.lambda);
        });
    });

    result.factor = timer.time("skinny_svd", [&] {
        return guarded("skinny_svd", [&] { return skinny_svd(result.representation.Z); });
    });

    result.W = timer.time("affinity", [&] {
        return guarded("affinity", [&] { return build_affinity(result.factor, cfg.alpha); });
    });

    result.labels = timer.time("spectral", [&] {
        return guarded("spectral", [&] {
            SpectralConfig sc;
            sc.k = cfg.k;
            sc.seed = cfg.seed;
            sc.kmeans_restarts = cfg.kmeans_restarts;
            sc.kmeans_max_iters = cfg.kmeans_max_iters;
            return ncuts(result.W, sc);
        });
    });

    if (truth)
        result.error = clustering_error(result.labels, *truth);
    return result;
}

} // namespace slrr
