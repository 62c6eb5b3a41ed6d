// Command-line front end for the symmetric low-rank representation
// clustering pipeline: single runs, parameter sweeps, synthetic data
// generation, and scaling benchmarks.
//
// Exit codes: 0 success, 1 numeric/convergence failure, 2 usage or I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slrr/io.hpp"
#include "slrr/pipeline.hpp"
#include "slrr/svg.hpp"
#include "slrr/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Options {
    // shared
    std::string input;
    std::string labels_path;
    std::string layout = "cols"; // cols | rows (orientation of samples on disk)
    std::string recovery = "identity";
    double lambda = 1e-2;
    int alpha = 2;
    std::string rank; // integer or multiple of k, e.g. "40", "10n"
    int k = 0;
    std::uint64_t seed = 0;
    int trials = 1;
    std::string out_dir = ".";
    double corrupt_ratio = -1.0; // active only when the flag was given
    bool corrupt_set = false;
    bool affine_ones = false;
    bool scale_unit = false;
    double rpca_lambda = -1.0;
    double rpca_tol = 1e-7;
    int rpca_max_iters = 500;
    std::string config_file;

    // sweep grids
    std::vector<double> lambda_grid;
    std::vector<int> alpha_grid;
    std::vector<std::string> rank_grid;

    // synth
    int synth_dim = 4;
    int synth_ambient = 50;
    int synth_points = 40;
    double synth_noise = 0.0;

    // bench
    std::vector<int> sizes;
    int bench_ambient = 30;
};

slrr::Layout parse_layout(const std::string& s) {
    if (s == "cols")
        return slrr::Layout::SamplesAsColumns;
    if (s == "rows")
        return slrr::Layout::SamplesAsRows;
    throw std::invalid_argument("layout must be 'cols' or 'rows', got '" + s + "'");
}

slrr::RecoveryMethod parse_recovery(const std::string& s) {
    if (s == "pca")
        return slrr::RecoveryMethod::Pca;
    if (s == "rpca")
        return slrr::RecoveryMethod::Rpca;
    if (s == "rp")
        return slrr::RecoveryMethod::RandomProjection;
    if (s == "identity")
        return slrr::RecoveryMethod::Identity;
    throw std::invalid_argument("recovery must be one of pca|rpca|rp|identity, got '" + s + "'");
}

slrr::PipelineConfig pipeline_config(const Options& o) {
    slrr::PipelineConfig cfg;
    cfg.recovery = parse_recovery(o.recovery);
    cfg.lambda = o.lambda;
    cfg.alpha = o.alpha;
    cfg.rank_expr = o.rank;
    cfg.k = o.k;
    cfg.seed = o.seed;
    cfg.affine_ones = o.affine_ones;
    cfg.rpca.lambda = o.rpca_lambda;
    cfg.rpca.tolerance = o.rpca_tol;
    cfg.rpca.max_iterations = o.rpca_max_iters;
    return cfg;
}

int distinct_count(const slrr::Labels& labels) {
    slrr::Labels sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return static_cast<int>(sorted.size());
}

json resolved_config(const char* command, const Options& o) {
    json cfg;
    cfg["command"] = command;
    if (!o.input.empty())
        cfg["input"] = o.input;
    if (!o.labels_path.empty())
        cfg["labels"] = o.labels_path;
    cfg["layout"] = o.layout;
    cfg["recovery"] = o.recovery;
    cfg["lambda"] = o.lambda;
    cfg["alpha"] = o.alpha;
    cfg["rank"] = o.rank;
    cfg["k"] = o.k;
    cfg["seed"] = o.seed;
    cfg["trials"] = o.trials;
    cfg["affine_ones"] = o.affine_ones;
    cfg["scale_unit"] = o.scale_unit;
    if (o.corrupt_set)
        cfg["corrupt_ratio"] = o.corrupt_ratio;
    if (o.recovery == "rpca") {
        cfg["rpca_lambda"] = o.rpca_lambda; // negative: derived as 1/sqrt(max(m,n))
        cfg["rpca_tol"] = o.rpca_tol;
        cfg["rpca_max_iters"] = o.rpca_max_iters;
    }
    cfg["out_dir"] = o.out_dir;
    return cfg;
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path.string());
    out << j.dump(2) << '\n';
}

void write_spectrum_csv(const fs::path& path, const slrr::Vector& spectrum) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path.string());
    out.precision(17);
    out << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < spectrum.size(); ++i)
        out << i << ',' << spectrum(i) << '\n';
}

std::string csv_quote(const std::string& s) {
    std::string quoted = "\"";
    for (char c : s)
        quoted += (c == '"') ? "\"\"" : std::string(1, c);
    quoted += '"';
    return quoted;
}

/// Load the input matrix (and optional ground truth), applying the
/// orientation flag. Throws on I/O or shape problems; callers map that to
/// exit code 2.
void load_dataset(const Options& o, slrr::Matrix& X, std::optional<slrr::Labels>& truth) {
    if (o.input.empty())
        throw std::invalid_argument("--input is required (on the command line or in a --config file)");
    X = slrr::load_matrix(o.input, parse_layout(o.layout));
    if (!o.labels_path.empty()) {
        slrr::Labels t = slrr::load_labels(o.labels_path);
        if (static_cast<Eigen::Index>(t.size()) != X.cols())
            throw std::runtime_error("label count " + std::to_string(t.size()) + " does not match sample count " +
                                     std::to_string(X.cols()));
        truth = std::move(t);
    }
}

/// Shared usage-time validation for commands that run the pipeline.
/// Mutates o.k when it can be inferred from the ground truth. Sweep passes
/// check_rank=false: rank problems there belong to individual grid cells,
/// not to the invocation.
void validate_run_config(Options& o, const slrr::Matrix& X, const std::optional<slrr::Labels>& truth,
                         bool check_rank = true) {
    if (o.k < 1 && truth)
        o.k = distinct_count(*truth);
    if (o.k < 1)
        throw std::invalid_argument("--k is required (or pass --labels to infer it)");
    if (o.k > X.cols())
        throw std::invalid_argument("--k exceeds the sample count");
    if (o.lambda <= 0.0)
        throw std::invalid_argument("--lambda must be positive");
    if (o.alpha < 1)
        throw std::invalid_argument("--alpha must be a positive integer");
    if (o.corrupt_set && !(o.corrupt_ratio >= 0.0 && o.corrupt_ratio <= 1.0))
        throw std::invalid_argument("--corrupt-ratio must lie in [0,1]");

    const slrr::RecoveryMethod method = parse_recovery(o.recovery); // throws on unknown methods
    if (!check_rank)
        return;
    const int r = slrr::resolve_rank(o.rank, o.k); // throws on malformed expressions
    if (method == slrr::RecoveryMethod::Pca) {
        if (r < 1)
            throw std::invalid_argument("--recovery pca requires --rank");
        if (r > std::min(X.rows(), X.cols()))
            throw std::invalid_argument("--rank exceeds min(m,n) = " +
                                        std::to_string(std::min(X.rows(), X.cols())));
    }
    if (method == slrr::RecoveryMethod::RandomProjection) {
        if (r < 1)
            throw std::invalid_argument("--recovery rp requires --rank");
        if (r > X.rows())
            throw std::invalid_argument("--rank exceeds the ambient dimension m = " + std::to_string(X.rows()));
    }
}

/// Data preparation shared by cluster and sweep: optional [0,1] scaling, then
/// optional seeded corruption.
slrr::Matrix prepare_data(const slrr::Matrix& X, const Options& o, std::uint64_t corrupt_seed) {
    slrr::Matrix prepared = o.scale_unit ? slrr::scale_to_unit_interval(X) : X;
    if (o.corrupt_set && o.corrupt_ratio > 0.0)
        prepared = slrr::corrupt_entries(prepared, o.corrupt_ratio, corrupt_seed);
    return prepared;
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

int cmd_cluster(Options o) {
    slrr::Matrix X;
    std::optional<slrr::Labels> truth;
    try {
        load_dataset(o, X, truth);
        validate_run_config(o, X, truth);
        if (o.trials < 1)
            throw std::invalid_argument("--trials must be >= 1");
        fs::create_directories(o.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "slrr cluster: " << e.what() << '\n';
        return 2;
    }

    const slrr::PipelineConfig base = pipeline_config(o);
    std::vector<slrr::PipelineResult> results;
    std::vector<double> errors, times;
    try {
        for (int t = 0; t < o.trials; ++t) {
            const std::uint64_t trial_seed = o.seed + static_cast<std::uint64_t>(t);
            slrr::PipelineConfig cfg = base;
            cfg.seed = trial_seed;
            const slrr::Matrix data = prepare_data(X, o, trial_seed);
            slrr::PipelineResult res = slrr::run_pipeline(data, cfg, truth ? &*truth : nullptr);
            double total = 0.0;
            for (const auto& [stage, sec] : res.stage_seconds)
                total += sec;
            times.push_back(total);
            if (res.error)
                errors.push_back(*res.error);
            results.push_back(std::move(res));
        }
    } catch (const std::exception& e) {
        std::cerr << "slrr cluster: " << e.what() << '\n';
        return 1;
    }

    bool rpca_converged = true;
    json trial_rows = json::array();
    for (size_t t = 0; t < results.size(); ++t) {
        const slrr::PipelineResult& res = results[t];
        json row;
        row["seed"] = o.seed + static_cast<std::uint64_t>(t);
        if (res.error)
            row["error"] = *res.error;
        row["seconds"] = times[t];
        row["stage_seconds"] = res.stage_seconds;
        row["representation_rank"] = res.factor.rank();
        if (res.recovery.method == slrr::RecoveryMethod::Rpca) {
            row["rpca"] = {{"iterations", res.recovery.iterations},
                           {"converged", res.recovery.converged},
                           {"residual", res.recovery.residual}};
            rpca_converged = rpca_converged && res.recovery.converged;
        }
        trial_rows.push_back(std::move(row));
    }

    const slrr::PipelineResult& first = results.front();
    try {
        const fs::path dir(o.out_dir);
        write_json_file(dir / "resolved_config.json", resolved_config("cluster", o));
        slrr::save_labels((dir / "labels.txt").string(), first.labels);
        slrr::write_heatmap_svg((dir / "affinity.svg").string(), first.W);
        write_spectrum_csv(dir / "spectrum.csv", first.representation.eigen_spectrum);

        json report;
        report["command"] = "cluster";
        report["config"] = resolved_config("cluster", o);
        report["data"] = {{"rows", X.rows()}, {"cols", X.cols()}};
        report["trials"] = std::move(trial_rows);
        if (!errors.empty()) {
            const slrr::TrialStats stats = slrr::aggregate(errors);
            report["error"] = {{"mean", stats.mean},
                               {"median", stats.median},
                               {"stddev", stats.stddev},
                               {"max", stats.max},
                               {"count", stats.count}};
        }
        const slrr::TrialStats tstats = slrr::aggregate(times);
        report["seconds"] = {{"mean", tstats.mean}, {"median", tstats.median}, {"max", tstats.max}};
        report["artifacts"] = {{"labels", "labels.txt"},
                               {"affinity", "affinity.svg"},
                               {"spectrum", "spectrum.csv"},
                               {"resolved_config", "resolved_config.json"}};
        write_json_file(dir / "results.json", report);
    } catch (const std::exception& e) {
        std::cerr << "slrr cluster: " << e.what() << '\n';
        return 2;
    }

    if (!errors.empty()) {
        const slrr::TrialStats stats = slrr::aggregate(errors);
        std::cout << "clustering error: mean " << stats.mean << " over " << stats.count
                  << (stats.count == 1 ? " trial" : " trials") << '\n';
    }
    std::cout << "wrote labels.txt, results.json, affinity.svg, spectrum.csv to " << o.out_dir << '\n';

    if (!rpca_converged) {
        std::cerr << "slrr cluster: rpca did not converge within " << o.rpca_max_iters
                  << " iterations; results written, see results.json residuals\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepCell {
    double lambda = 0.0;
    int alpha = 0;
    std::string rank;
    int resolved_rank = 0;
    double error = -1.0; // negative: unavailable
    double seconds = 0.0;
    bool failed = false;
    std::string message;
};

int cmd_sweep(Options o) {
    slrr::Matrix X;
    std::optional<slrr::Labels> truth;
    try {
        load_dataset(o, X, truth);
        if (o.lambda_grid.empty())
            o.lambda_grid.push_back(o.lambda);
        if (o.alpha_grid.empty())
            o.alpha_grid.push_back(o.alpha);
        if (o.rank_grid.empty())
            o.rank_grid.push_back(o.rank);
        // Per-cell rank validation is deliberately deferred: a bad grid cell
        // is recorded as failed without stopping its neighbors.
        validate_run_config(o, X, truth, /*check_rank=*/false);
        for (double l : o.lambda_grid)
            if (l <= 0.0)
                throw std::invalid_argument("--lambda-grid values must be positive");
        for (int a : o.alpha_grid)
            if (a < 1)
                throw std::invalid_argument("--alpha-grid values must be positive integers");
        fs::create_directories(o.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "slrr sweep: " << e.what() << '\n';
        return 2;
    }

    slrr::Matrix data;
    try {
        data = prepare_data(X, o, o.seed);
    } catch (const std::exception& e) {
        std::cerr << "slrr sweep: " << e.what() << '\n';
        return 1;
    }

    std::vector<SweepCell> cells;
    for (const std::string& r : o.rank_grid)
        for (int a : o.alpha_grid)
            for (double l : o.lambda_grid) {
                SweepCell c;
                c.lambda = l;
                c.alpha = a;
                c.rank = r;
                cells.push_back(std::move(c));
            }

    const slrr::PipelineConfig base = pipeline_config(o);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            SweepCell& cell = cells[i];
            const auto start = std::chrono::steady_clock::now();
            try {
                slrr::PipelineConfig cfg = base;
                cfg.lambda = cell.lambda;
                cfg.alpha = cell.alpha;
                cfg.rank_expr = cell.rank;
                cell.resolved_rank = slrr::resolve_rank(cell.rank, o.k);
                slrr::PipelineResult res = slrr::run_pipeline(data, cfg, truth ? &*truth : nullptr);
                if (res.error)
                    cell.error = *res.error;
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.message = e.what();
            }
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            cell.seconds = elapsed.count();
        }
    };

    const size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t workers = std::min(cells.size(), hw);
    std::vector<std::thread> pool;
    for (size_t t = 0; t + 1 < workers; ++t)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    size_t failures = 0;
    for (const SweepCell& c : cells)
        if (c.failed)
            ++failures;

    try {
        const fs::path dir(o.out_dir);
        write_json_file(dir / "resolved_config.json", resolved_config("sweep", o));

        std::ofstream csv(dir / "sweep.csv");
        if (!csv)
            throw std::runtime_error("cannot open file for writing: " + (dir / "sweep.csv").string());
        csv.precision(17);
        csv << "lambda,alpha,rank,resolved_rank,error,seconds,status\n";
        for (const SweepCell& c : cells) {
            csv << c.lambda << ',' << c.alpha << ',' << (c.rank.empty() ? "-" : c.rank) << ',';
            if (c.failed)
                csv << ",," << csv_quote(c.message) << '\n';
            else {
                csv << c.resolved_rank << ',';
                if (c.error >= 0.0)
                    csv << c.error;
                csv << ',' << c.seconds << ",ok\n";
            }
        }
        csv.close();

        // one chart per rank value: error (or runtime without truth) vs
        // lambda, one curve per alpha
        const bool plot_error = truth.has_value();
        for (const std::string& r : o.rank_grid) {
            std::vector<slrr::ChartSeries> series;
            for (int a : o.alpha_grid) {
                slrr::ChartSeries s;
                s.name = "alpha=" + std::to_string(a);
                for (double l : o.lambda_grid) {
                    double y = std::numeric_limits<double>::quiet_NaN();
                    for (const SweepCell& c : cells)
                        if (c.rank == r && c.alpha == a && c.lambda == l && !c.failed)
                            y = plot_error ? c.error : c.seconds;
                    s.y.push_back(y);
                }
                series.push_back(std::move(s));
            }
            const std::string tag = r.empty() ? "none" : r;
            slrr::write_line_chart_svg((dir / ("sweep_r" + tag + ".svg")).string(),
                                       "rank " + tag + (plot_error ? ": clustering error" : ": runtime"),
                                       o.lambda_grid, series, "lambda",
                                       plot_error ? "clustering error" : "seconds");
        }

        json report;
        report["command"] = "sweep";
        report["config"] = resolved_config("sweep", o);
        report["grid"] = {{"lambda", o.lambda_grid}, {"alpha", o.alpha_grid}, {"rank", o.rank_grid}};
        report["cells_total"] = cells.size();
        report["cells_failed"] = failures;
        json rows = json::array();
        const SweepCell* best = nullptr;
        for (const SweepCell& c : cells) {
            json row;
            row["lambda"] = c.lambda;
            row["alpha"] = c.alpha;
            row["rank"] = c.rank;
            if (c.failed)
                row["failed"] = c.message;
            else {
                row["resolved_rank"] = c.resolved_rank;
                if (c.error >= 0.0)
                    row["error"] = c.error;
                row["seconds"] = c.seconds;
                if (plot_error && c.error >= 0.0 && (!best || c.error < best->error))
                    best = &c;
            }
            rows.push_back(std::move(row));
        }
        report["cells"] = std::move(rows);
        if (best)
            report["best"] = {{"lambda", best->lambda},
                              {"alpha", best->alpha},
                              {"rank", best->rank},
                              {"error", best->error}};
        write_json_file(dir / "results.json", report);
    } catch (const std::exception& e) {
        std::cerr << "slrr sweep: " << e.what() << '\n';
        return 2;
    }

    std::cout << "swept " << cells.size() << " cells (" << failures << " failed); wrote sweep.csv and charts to "
              << o.out_dir << '\n';
    if (failures == cells.size()) {
        std::cerr << "slrr sweep: every cell failed; first message: " << cells.front().message << '\n';
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(Options o) {
    slrr::SynthSpec spec;
    slrr::SynthResult generated;
    try {
        spec.num_subspaces = o.k;
        spec.subspace_dim = o.synth_dim;
        spec.ambient_dim = o.synth_ambient;
        spec.points_per_subspace = o.synth_points;
        spec.noise_sigma = o.synth_noise;
        spec.seed = o.seed;
        if (o.corrupt_set && !(o.corrupt_ratio >= 0.0 && o.corrupt_ratio <= 1.0))
            throw std::invalid_argument("--corrupt-ratio must lie in [0,1]");
        generated = slrr::generate_union_of_subspaces(spec); // validates the spec
        fs::create_directories(o.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "slrr synth: " << e.what() << '\n';
        return 2;
    }

    try {
        const fs::path dir(o.out_dir);
        slrr::Matrix data = o.scale_unit ? slrr::scale_to_unit_interval(generated.data) : generated.data;
        slrr::save_matrix((dir / "data.txt").string(), data);
        slrr::save_labels((dir / "labels.txt").string(), generated.labels);
        if (o.corrupt_set)
            slrr::save_matrix((dir / "data_corrupted.txt").string(),
                              slrr::corrupt_entries(data, o.corrupt_ratio, o.seed));

        json cfg = resolved_config("synth", o);
        cfg["subspaces"] = spec.num_subspaces;
        cfg["subspace_dim"] = spec.subspace_dim;
        cfg["ambient_dim"] = spec.ambient_dim;
        cfg["points_per_subspace"] = spec.points_per_subspace;
        cfg["noise_sigma"] = spec.noise_sigma;
        write_json_file(dir / "resolved_config.json", cfg);
    } catch (const std::exception& e) {
        std::cerr << "slrr synth: " << e.what() << '\n';
        return 2;
    }

    std::cout << "wrote data.txt (" << spec.ambient_dim << "x" << spec.num_subspaces * spec.points_per_subspace
              << "), labels.txt" << (o.corrupt_set ? ", data_corrupted.txt" : "") << " to " << o.out_dir << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

int cmd_bench(Options o) {
    try {
        if (o.sizes.empty())
            throw std::invalid_argument("--sizes is required");
        for (size_t i = 0; i < o.sizes.size(); ++i) {
            if (o.sizes[i] < 1)
                throw std::invalid_argument("--sizes entries must be positive");
            if (i > 0 && o.sizes[i] <= o.sizes[i - 1])
                throw std::invalid_argument("--sizes must be strictly ascending");
        }
        if (o.k < 1)
            o.k = 5;
        if (o.sizes.front() < o.k)
            throw std::invalid_argument("smallest size must be >= --k");
        if (o.synth_dim >= o.bench_ambient)
            throw std::invalid_argument("--dim must be < --ambient");
        if (o.lambda <= 0.0 || o.alpha < 1 || o.trials < 1)
            throw std::invalid_argument("--lambda, --alpha and --trials must be positive");
        fs::create_directories(o.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "slrr bench: " << e.what() << '\n';
        return 2;
    }

    json size_rows = json::array();
    std::vector<double> log_n, log_t;
    try {
        for (int n : o.sizes) {
            slrr::SynthSpec spec;
            spec.num_subspaces = o.k;
            spec.subspace_dim = o.synth_dim;
            spec.ambient_dim = o.bench_ambient;
            spec.points_per_subspace = n / o.k;
            spec.seed = o.seed;
            const slrr::SynthResult gen = slrr::generate_union_of_subspaces(spec);
            const int actual_n = spec.num_subspaces * spec.points_per_subspace;

            std::vector<double> reps;
            for (int t = 0; t < o.trials; ++t) {
                const auto start = std::chrono::steady_clock::now();
                const slrr::Representation rep = slrr::solve(gen.data, o.lambda);
                const slrr::SkinnyFactor f = slrr::skinny_svd(rep.Z);
                const slrr::Matrix W = slrr::build_affinity(f, o.alpha);
                slrr::SpectralConfig sc;
                sc.k = o.k;
                sc.seed = o.seed + static_cast<std::uint64_t>(t);
                const slrr::Labels labels = slrr::ncuts(W, sc);
                (void)labels;
                const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
                reps.push_back(elapsed.count());
            }
            const slrr::TrialStats stats = slrr::aggregate(reps);
            log_n.push_back(std::log(static_cast<double>(actual_n)));
            log_t.push_back(std::log(std::max(stats.median, 1e-12)));

            json row;
            row["n"] = actual_n;
            row["seconds"] = reps;
            row["median_seconds"] = stats.median;
            size_rows.push_back(std::move(row));
            std::cout << "n=" << actual_n << "  median " << stats.median << " s over " << o.trials
                      << (o.trials == 1 ? " rep" : " reps") << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "slrr bench: " << e.what() << '\n';
        return 1;
    }

    std::optional<double> slope;
    if (log_n.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (size_t i = 0; i < log_n.size(); ++i) {
            mx += log_n[i];
            my += log_t[i];
        }
        mx /= static_cast<double>(log_n.size());
        my /= static_cast<double>(log_n.size());
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < log_n.size(); ++i) {
            num += (log_n[i] - mx) * (log_t[i] - my);
            den += (log_n[i] - mx) * (log_n[i] - mx);
        }
        slope = num / den;
        std::cout << "fitted log-log slope: " << *slope << '\n';
    }

    try {
        const fs::path dir(o.out_dir);
        write_json_file(dir / "resolved_config.json", resolved_config("bench", o));
        json report;
        report["command"] = "bench";
        report["ambient_dim"] = o.bench_ambient;
        report["subspaces"] = o.k;
        report["sizes"] = std::move(size_rows);
        if (slope)
            report["slope"] = *slope;
        else
            report["slope"] = nullptr;
        write_json_file(dir / "results.json", report);
    } catch (const std::exception& e) {
        std::cerr << "slrr bench: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

/// Flat key=value config support. CLI11 only consults config files attached
/// to the root app, and every option here lives on a subcommand, so the file
/// is expanded into synthetic `--key=value` tokens before parsing instead.
/// Keys whose option already appears on the command line are skipped, which
/// is what makes explicit flags override the file. Unknown keys then fail
/// parsing like any other unexpected argument.
std::vector<std::string> expand_config_args(const std::vector<std::string>& raw) {
    std::string path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config") {
            if (i + 1 >= raw.size())
                throw std::runtime_error("--config expects a file path");
            path = raw[i + 1];
            break;
        }
        if (raw[i].rfind("--config=", 0) == 0) {
            path = raw[i].substr(std::string("--config=").size());
            break;
        }
    }
    std::vector<std::string> args = raw;
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    const auto trim = [](const std::string& s) {
        const char* ws = " \t\r";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos)
            return std::string();
        return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };

    std::vector<std::pair<std::string, std::string>> entries; // last occurrence of a key wins
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        const auto eq = stripped.find('=');
        const std::string where = "config file '" + path + "' line " + std::to_string(line_no);
        if (eq == std::string::npos)
            throw std::runtime_error(where + ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(where + ": empty key");
        if (key == "config")
            throw std::runtime_error(where + ": config files cannot nest");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        const auto prior = std::find_if(entries.begin(), entries.end(),
                                        [&](const auto& kv) { return kv.first == key; });
        if (prior != entries.end())
            prior->second = value;
        else
            entries.emplace_back(key, value);
    }

    for (const auto& [key, value] : entries) {
        const std::string flag = "--" + key;
        const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& tok) {
            return tok == flag || tok.rfind(flag + "=", 0) == 0;
        });
        if (!given)
            args.push_back(flag + "=" + value);
    }
    return args;
}

void add_pipeline_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--input", o.input, "data matrix file (text, '#' comments)");
    cmd->add_option("--labels", o.labels_path, "ground-truth labels, one per line");
    cmd->add_option("--layout", o.layout, "sample orientation on disk")
        ->check(CLI::IsMember({"cols", "rows"}))
        ->capture_default_str();
    cmd->add_option("--recovery", o.recovery, "low-rank recovery step")
        ->check(CLI::IsMember({"pca", "rpca", "rp", "identity"}))
        ->capture_default_str();
    cmd->add_option("--lambda", o.lambda, "regularization weight (> 0)")->capture_default_str();
    cmd->add_option("--alpha", o.alpha, "affinity sharpening exponent (positive integer)")->capture_default_str();
    cmd->add_option("--rank", o.rank, "recovery target rank: integer or multiple of k, e.g. 40 or 10n");
    cmd->add_option("--k", o.k, "number of clusters (inferred from --labels when omitted)");
    cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
    cmd->add_option("--trials", o.trials, "seeded repetitions (seed, seed+1, ...)")->capture_default_str();
    cmd->add_option("--corrupt-ratio", o.corrupt_ratio, "replace this fraction of entries with uniform [0,1) draws");
    cmd->add_flag("--affine-ones", o.affine_ones, "append a constant-ones row before the solve");
    cmd->add_flag("--scale-unit", o.scale_unit, "min-max scale the data to [0,1] first");
    cmd->add_option("--rpca-lambda", o.rpca_lambda, "sparsity weight (default 1/sqrt(max(m,n)))");
    cmd->add_option("--rpca-tol", o.rpca_tol, "rpca convergence tolerance")->capture_default_str();
    cmd->add_option("--rpca-max-iters", o.rpca_max_iters, "rpca iteration cap")->capture_default_str();
    cmd->add_option("--out-dir", o.out_dir, "artifact directory")->capture_default_str();
    cmd->add_option("--config", o.config_file, "flat key=value config file; command-line flags override");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symmetric low-rank representation subspace clustering"};
    app.require_subcommand(1);

    Options cluster_opts, sweep_opts, synth_opts, bench_opts;

    CLI::App* cluster = app.add_subcommand("cluster", "run the full pipeline on one data matrix");
    add_pipeline_flags(cluster, cluster_opts);

    CLI::App* sweep = app.add_subcommand("sweep", "full-factorial parameter study over lambda/alpha/rank grids");
    add_pipeline_flags(sweep, sweep_opts);
    sweep->add_option("--lambda-grid", sweep_opts.lambda_grid, "comma-separated lambda values")->delimiter(',');
    sweep->add_option("--alpha-grid", sweep_opts.alpha_grid, "comma-separated alpha values")->delimiter(',');
    sweep->add_option("--rank-grid", sweep_opts.rank_grid, "comma-separated rank expressions")->delimiter(',');

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic union-of-subspaces dataset");
    synth->add_option("--k", synth_opts.k, "number of subspaces")->required();
    synth->add_option("--dim", synth_opts.synth_dim, "dimension of each subspace")->capture_default_str();
    synth->add_option("--ambient", synth_opts.synth_ambient, "ambient dimension")->capture_default_str();
    synth->add_option("--points", synth_opts.synth_points, "points per subspace")->capture_default_str();
    synth->add_option("--noise", synth_opts.synth_noise, "additive gaussian noise sigma")->capture_default_str();
    synth->add_option("--seed", synth_opts.seed, "random seed")->capture_default_str();
    synth->add_option("--corrupt-ratio", synth_opts.corrupt_ratio,
                      "also write data_corrupted.txt with this fraction of entries replaced");
    synth->add_flag("--scale-unit", synth_opts.scale_unit, "min-max scale data.txt to [0,1]");
    synth->add_option("--out-dir", synth_opts.out_dir, "artifact directory")->capture_default_str();
    synth->add_option("--config", synth_opts.config_file,
                      "flat key=value config file; command-line flags override");

    CLI::App* bench = app.add_subcommand("bench", "time the solve+affinity+spectral core across sample counts");
    bench->add_option("--sizes", bench_opts.sizes, "ascending sample counts, e.g. 200,400,800")
        ->required()
        ->delimiter(',');
    bench->add_option("--ambient", bench_opts.bench_ambient, "ambient dimension m")->capture_default_str();
    bench->add_option("--k", bench_opts.k, "number of planted subspaces");
    bench->add_option("--dim", bench_opts.synth_dim, "dimension of each subspace")->capture_default_str();
    bench->add_option("--lambda", bench_opts.lambda, "regularization weight")->capture_default_str();
    bench->add_option("--alpha", bench_opts.alpha, "affinity exponent")->capture_default_str();
    bench->add_option("--seed", bench_opts.seed, "random seed")->capture_default_str();
    bench->add_option("--trials", bench_opts.trials, "repetitions per size (median is fitted)")
        ->capture_default_str();
    bench->add_option("--out-dir", bench_opts.out_dir, "artifact directory")->capture_default_str();
    bench->add_option("--config", bench_opts.config_file,
                      "flat key=value config file; command-line flags override");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config_args(args);
    } catch (const std::exception& e) {
        std::cerr << "slrr: " << e.what() << '\n';
        return 2;
    }
    std::reverse(args.begin(), args.end()); // the vector overload of parse() consumes back-to-front
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help/version exit clean; parse errors are usage errors
    }

    cluster_opts.corrupt_set = cluster->count("--corrupt-ratio") > 0;
    sweep_opts.corrupt_set = sweep->count("--corrupt-ratio") > 0;
    synth_opts.corrupt_set = synth->count("--corrupt-ratio") > 0;

    if (cluster->parsed())
        return cmd_cluster(std::move(cluster_opts));
    if (sweep->parsed())
        return cmd_sweep(std::move(sweep_opts));
    if (synth->parsed())
        return cmd_synth(std::move(synth_opts));
    if (bench->parsed())
        return cmd_bench(std::move(bench_opts));
    return 2;
}
