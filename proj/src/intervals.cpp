#include "tskit/intervals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "tskit/parallel.hpp"
#include "tskit/rng.hpp"

namespace tskit {

namespace {

constexpr double kLeafGain = 1e-12; // gain at or below this is rounding dust

double entropy_bits(const std::map<std::string, std::size_t>& counts, std::size_t total) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::string majority(const std::vector<std::string>& labels,
                     const std::vector<std::size_t>& rows) {
    std::map<std::string, std::size_t> counts;
    for (std::size_t r : rows) ++counts[labels[r]];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, c] : counts) { // map order resolves ties lexicographically
        if (c > best_count) {
            best = label;
            best_count = c;
        }
    }
    return best;
}

double stat_of(const IntervalStats& stats, IntervalKind kind) {
    switch (kind) {
    case IntervalKind::mean: return stats.mean;
    case IntervalKind::std_dev: return stats.stdev;
    case IntervalKind::slope: return stats.slope;
    }
    throw InvalidArgumentError("unknown interval kind");
}

struct BestSplit {
    bool found = false;
    double threshold = 0.0;
    double gain = 0.0;
    double margin = 0.0;
};

// Best midpoint threshold by entropy gain, ties to the larger margin.
BestSplit best_threshold(const std::vector<double>& values,
                         const std::vector<std::string>& labels,
                         const std::vector<std::size_t>& rows) {
    const std::size_t n = rows.size();
    std::vector<std::size_t> order(rows);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });

    std::map<std::string, std::size_t> total_counts;
    for (std::size_t r : rows) ++total_counts[labels[r]];
    const double total_entropy = entropy_bits(total_counts, n);

    BestSplit best;
    std::map<std::string, std::size_t> left;
    std::size_t n_left = 0;
    for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        ++left[labels[order[pos]]];
        ++n_left;
        const double lo = values[order[pos]];
        const double hi = values[order[pos + 1]];
        if (lo == hi) continue;
        std::map<std::string, std::size_t> right;
        for (const auto& [label, c] : total_counts) {
            const auto it = left.find(label);
            right[label] = c - (it == left.end() ? 0 : it->second);
        }
        const std::size_t n_right = n - n_left;
        const double gain =
            total_entropy -
            (static_cast<double>(n_left) / static_cast<double>(n)) * entropy_bits(left, n_left) -
            (static_cast<double>(n_right) / static_cast<double>(n)) * entropy_bits(right, n_right);
        const double margin = hi - lo;
        if (!best.found || gain > best.gain || (gain == best.gain && margin > best.margin)) {
            best = BestSplit{true, lo + margin / 2.0, gain, margin};
        }
    }
    return best;
}

struct TreeBuilder {
    const LabeledDataset& ds;
    std::size_t n; // common series length
    Rng rng;
    std::vector<TreeNode> nodes;

    // Returns the index of the subtree root for these rows.
    int build(const std::vector<std::size_t>& rows) {
        const int index = static_cast<int>(nodes.size());
        nodes.emplace_back();

        bool pure = true;
        for (std::size_t r : rows) {
            if (ds.label(r) != ds.label(rows[0])) {
                pure = false;
                break;
            }
        }
        if (pure) {
            nodes[index].label = ds.label(rows[0]);
            return index;
        }

        const std::size_t draws = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(n))));

        struct Winner {
            bool found = false;
            std::size_t t1 = 0, t2 = 0;
            IntervalKind kind = IntervalKind::mean;
            BestSplit split;
            std::vector<double> values;
        } winner;

        for (std::size_t d = 0; d < draws; ++d) {
            const std::size_t t1 = rng.uniform_int(1, n - 1);
            const std::size_t len = rng.uniform_int(2, n - t1 + 1);
            const std::size_t t2 = t1 + len - 1;
            std::array<std::vector<double>, 3> by_kind;
            for (auto& v : by_kind) v.resize(ds.size());
            for (std::size_t r : rows) {
                const IntervalStats stats = interval_features(ds.series(r), t1, t2);
                by_kind[0][r] = stats.mean;
                by_kind[1][r] = stats.stdev;
                by_kind[2][r] = stats.slope;
            }
            for (int k = 0; k < 3; ++k) {
                const BestSplit split = best_threshold(by_kind[k], ds.labels(), rows);
                if (!split.found) continue;
                // Earlier draws win exact ties, so the draw sequence fixes the tree.
                if (!winner.found || split.gain > winner.split.gain ||
                    (split.gain == winner.split.gain && split.margin > winner.split.margin)) {
                    winner.found = true;
                    winner.t1 = t1;
                    winner.t2 = t2;
                    winner.kind = static_cast<IntervalKind>(k);
                    winner.split = split;
                    winner.values = by_kind[k];
                }
            }
        }

        if (!winner.found || winner.split.gain <= kLeafGain) {
            nodes[index].label = majority(ds.labels(), rows);
            return index;
        }

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : rows) {
            (winner.values[r] <= winner.split.threshold ? left_rows : right_rows).push_back(r);
        }

        nodes[index].t1 = winner.t1;
        nodes[index].t2 = winner.t2;
        nodes[index].kind = winner.kind;
        nodes[index].threshold = winner.split.threshold;
        nodes[index].gain = winner.split.gain;
        const int left = build(left_rows);
        const int right = build(right_rows);
        nodes[index].left = left;
        nodes[index].right = right;
        return index;
    }
};

} // namespace

std::string interval_kind_name(IntervalKind kind) {
    switch (kind) {
    case IntervalKind::mean: return "mean";
    case IntervalKind::std_dev: return "std";
    case IntervalKind::slope: return "slope";
    }
    throw InvalidArgumentError("unknown interval kind");
}

IntervalStats interval_features(const TimeSeries& x, std::size_t t1, std::size_t t2) {
    if (t1 < 1 || t1 >= t2 || t2 > x.size()) {
        throw BadIntervalError("interval [" + std::to_string(t1) + ", " + std::to_string(t2) +
                               "] invalid for series of length " + std::to_string(x.size()));
    }
    const auto window = x.span().subspan(t1 - 1, t2 - t1 + 1);
    const double m = mean_of(window);
    const double sd = sample_std_of(window);

    // Slope of x against 1-based position; centered positions keep it exact.
    const double len = static_cast<double>(window.size());
    const double pc = (len - 1.0) / 2.0;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < window.size(); ++j) {
        const double p = static_cast<double>(j) - pc;
        num += p * (window[j] - m);
        den += p * p;
    }
    return IntervalStats{m, sd, num / den};
}

std::string IntervalTree::predict(const TimeSeries& x) const {
    int at = 0;
    for (;;) {
        const TreeNode& node = nodes[static_cast<std::size_t>(at)];
        if (node.left < 0) return node.label;
        const IntervalStats stats = interval_features(x, node.t1, node.t2);
        at = stat_of(stats, node.kind) <= node.threshold ? node.left : node.right;
    }
}

IntervalForest train_forest(const LabeledDataset& ds, std::size_t n_trees, std::uint64_t seed) {
    if (n_trees < 1) throw InvalidArgumentError("n_trees must be at least 1");
    const std::size_t n = ds.series(0).size();
    for (const auto& s : ds.all_series()) {
        if (s.size() != n) {
            throw LengthMismatchError("forest training needs equal-length series; '" + s.id() +
                                      "' has " + std::to_string(s.size()) + " values, expected " +
                                      std::to_string(n));
        }
    }
    if (n < 4) throw TooShortError("forest training needs series of length at least 4");
    if (ds.classes().size() < 2) {
        throw SingleClassError("forest training needs at least 2 classes");
    }

    std::vector<std::size_t> all_rows(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) all_rows[i] = i;

    IntervalForest forest;
    forest.seed = seed;
    forest.series_length = n;
    forest.classes = ds.classes();
    forest.trees.resize(n_trees);
    parallel_for(n_trees, [&](std::size_t t) {
        TreeBuilder builder{ds, n, Rng(seed, t), {}};
        builder.build(all_rows);
        forest.trees[t].nodes = std::move(builder.nodes);
    });
    return forest;
}

std::string forest_predict(const IntervalForest& forest, const TimeSeries& x) {
    std::size_t max_bound = 0;
    for (const auto& tree : forest.trees) {
        for (const auto& node : tree.nodes) {
            if (node.left >= 0) max_bound = std::max(max_bound, node.t2);
        }
    }
    if (x.size() < max_bound) {
        throw LengthMismatchError("series of length " + std::to_string(x.size()) +
                                  " is shorter than the largest trained interval bound " +
                                  std::to_string(max_bound));
    }
    std::map<std::string, std::size_t> votes;
    for (const auto& tree : forest.trees) ++votes[tree.predict(x)];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, c] : votes) { // map order resolves ties lexicographically
        if (c > best_count) {
            best = label;
            best_count = c;
        }
    }
    return best;
}

ImportanceCurve temporal_importance(const IntervalForest& forest) {
    ImportanceCurve out;
    out.series_length = forest.series_length;
    out.curve.assign(3, std::vector<double>(forest.series_length, 0.0));
    for (const auto& tree : forest.trees) {
        for (const auto& node : tree.nodes) {
            if (node.left < 0) continue;
            auto& row = out.curve[static_cast<std::size_t>(node.kind)];
            for (std::size_t t = node.t1; t <= node.t2; ++t) row[t - 1] += node.gain;
        }
    }
    return out;
}

} // namespace tskit
