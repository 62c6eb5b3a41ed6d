#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "slrr/types.hpp"

namespace slrr {

namespace detail {

/// Hungarian algorithm (potentials form), minimizing total cost of a square
/// assignment. Returns match[row] = column. O(k^3).
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0), v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> way(static_cast<size_t>(n) + 1, 0), match(static_cast<size_t>(n) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            const int i0 = match[static_cast<size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)])
                    continue;
                const double cur = cost[static_cast<size_t>(i0 - 1)][static_cast<size_t>(j - 1)] -
                                   u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (match[static_cast<size_t>(j)] > 0)
            row_to_col[static_cast<size_t>(match[static_cast<size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

/// Map arbitrary label values to dense 0-based indices, preserving order of
/// first appearance of the sorted distinct values.
inline std::vector<int> densify(const Labels& labels, std::vector<int>& values_out) {
    std::vector<int> values(labels);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    values_out = values;
    std::vector<int> dense(labels.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        const auto it = std::lower_bound(values.begin(), values.end(), labels[i]);
        dense[i] = static_cast<int>(it - values.begin());
    }
    return dense;
}

} // namespace detail

/**
 * Fraction of misclassified samples after the optimal one-to-one alignment of
 * predicted clusters to ground-truth clusters (maximum-match assignment over
 * the confusion matrix). Invariant under relabeling of either argument.
 */
inline double clustering_error(const Labels& predicted, const Labels& truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("clustering_error: length mismatch");
    if (predicted.empty())
        throw std::invalid_argument("clustering_error: empty label vectors");

    std::vector<int> pred_values, truth_values;
    const std::vector<int> p = detail::densify(predicted, pred_values);
    const std::vector<int> t = detail::densify(truth, truth_values);
    const int k = static_cast<int>(std::max(pred_values.size(), truth_values.size()));

    // confusion counts, padded square; maximize matches == minimize negated
    std::vector<std::vector<double>> cost(static_cast<size_t>(k), std::vector<double>(static_cast<size_t>(k), 0.0));
    for (size_t i = 0; i < p.size(); ++i)
        cost[static_cast<size_t>(p[i])][static_cast<size_t>(t[i])] -= 1.0;

    const std::vector<int> assign = detail::min_cost_assignment(cost);
    double matched = 0.0;
    for (int r = 0; r < k; ++r)
        matched -= cost[static_cast<size_t>(r)][static_cast<size_t>(assign[static_cast<size_t>(r)])];
    return 1.0 - matched / static_cast<double>(p.size());
}

struct TrialStats {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // sample std (n-1), 0 for a single value
    double max = 0.0;
    int count = 0;
};

/// Order-independent summary: values are sorted before aggregation.
inline TrialStats aggregate(std::vector<double> values) {
    TrialStats s;
    s.count = static_cast<int>(values.size());
    if (values.empty())
        return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    s.max = values.back();
    const size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    if (values.size() > 1) {
        double acc = 0.0;
        for (double v : values)
            acc += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
    }
    return s;
}

struct TrialOutcome {
    std::uint64_t seed = 0;
    double error = 0.0;
    double seconds = 0.0;
    bool failed = false;
    std::string message;
};

struct TrialAggregate {
    std::vector<TrialOutcome> trials;
    TrialStats error_stats;
    TrialStats time_stats;
};

/**
 * Run one trial per seed; stage errors are recorded per trial and excluded
 * from the statistics rather than aborting the batch.
 */
inline TrialAggregate run_trials(const std::function<TrialOutcome(std::uint64_t)>& trial,
                                 const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty())
        throw std::invalid_argument("run_trials: no seeds given");
    TrialAggregate agg;
    std::vector<double> errors, times;
    for (std::uint64_t seed : seeds) {
        TrialOutcome out;
        try {
            out = trial(seed);
            out.seed = seed;
        } catch (const std::exception& e) {
            out.seed = seed;
            out.failed = true;
            out.message = e.what();
        }
        if (!out.failed) {
            errors.push_back(out.error);
            times.push_back(out.seconds);
        }
        agg.trials.push_back(std::move(out));
    }
    agg.error_stats = aggregate(std::move(errors));
    agg.time_stats = aggregate(std::move(times));
    return agg;
}

} // namespace slrr
