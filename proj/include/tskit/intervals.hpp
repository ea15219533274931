#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tskit/series.hpp"

namespace tskit {

enum class IntervalKind {
    mean,
    std_dev,
    slope,
};

std::string interval_kind_name(IntervalKind kind);

struct IntervalStats {
    double mean;
    double stdev; // unbiased sample std over the interval
    double slope; // least-squares slope of x_i against position i
};

/// Stats of positions t1..t2, 1-based inclusive. Requires 1 <= t1 < t2 <= N
/// (std and slope need at least two points); BadIntervalError otherwise.
IntervalStats interval_features(const TimeSeries& x, std::size_t t1, std::size_t t2);

struct TreeNode {
    // Internal nodes test feature(kind, [t1, t2]) <= threshold, left on true.
    std::size_t t1 = 0; // 1-based inclusive bounds
    std::size_t t2 = 0;
    IntervalKind kind = IntervalKind::mean;
    double threshold = 0.0;
    double gain = 0.0;
    int left = -1;  // child indices into IntervalTree::nodes; -1 on leaves
    int right = -1;
    std::string label; // leaves only
};

struct IntervalTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    std::string predict(const TimeSeries& x) const;
};

struct IntervalForest {
    std::vector<IntervalTree> trees;
    std::uint64_t seed = 0;
    std::size_t series_length = 0;
    std::vector<std::string> classes;
};

/// Trains n_trees independent trees on the full dataset (no bootstrap). Each
/// node draws ceil(sqrt(N)) random intervals (t1 uniform in [1, N-1], length
/// uniform in [2, N-t1+1]) and considers the three stats of each. Tree t uses
/// the deterministic stream (seed, t), so parallel and serial training agree.
IntervalForest train_forest(const LabeledDataset& ds, std::size_t n_trees,
                            std::uint64_t seed);

/// Majority vote over trees; ties go to the lexicographically smallest label.
std::string forest_predict(const IntervalForest& forest, const TimeSeries& x);

struct ImportanceCurve {
    // curve[kind][t - 1] = summed split gain of internal nodes whose interval
    // covers time point t; kind indexed as IntervalKind.
    std::vector<std::vector<double>> curve;
    std::size_t series_length = 0;
};

ImportanceCurve temporal_importance(const IntervalForest& forest);

} // namespace tskit
