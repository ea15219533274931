#pragma once

#include <span>
#include <string>
#include <vector>

#include "tskit/matrix.hpp"
#include "tskit/series.hpp"

namespace tskit {

struct Subsequence {
    std::vector<double> values;
    std::string source_id; // series it was cut from
    std::size_t start = 1; // 1-based: covers positions start..start+l-1 of the source
};

/// Minimum Euclidean distance between the subsequence and any same-length
/// window of x. Raw values, no per-window normalization.
double subsequence_distance(const TimeSeries& x, std::span<const double> sub);

struct SplitResult {
    double threshold;
    double gain;   // information gain, bits
    double margin; // gap between the closest distances across the threshold
};

/// Best single-threshold binary split of the labeled distances. Candidate
/// thresholds are midpoints of consecutive sorted distinct values; ties on
/// gain prefer the larger margin, then the smaller threshold. All distances
/// equal: gain 0, threshold = the common value.
SplitResult optimal_split(std::span<const double> distances,
                          std::span<const std::string> labels);

struct Shapelet {
    Subsequence subsequence;
    double threshold;
    double gain;
    double margin;
    std::string below_label; // majority label at distance <= threshold
    std::string above_label; // majority label above
};

struct DiscoveryParams {
    std::size_t l_min;
    std::size_t l_max;
    std::size_t stride = 1;         // candidate start step within each source
    bool normalize_windows = false; // z-normalize candidate and windows
};

/// Exhaustive search over every candidate subsequence of each series,
/// lengths l_min..l_max. Ties: gain desc, margin desc, length asc, then
/// (source_id, start) asc.
Shapelet discover_shapelet(const LabeledDataset& ds, const DiscoveryParams& params);

struct ShapeletTransformResult {
    std::vector<Shapelet> shapelets;
    FeatureMatrix features; // column j = distances to shapelet j
};

/// Top-k shapelets by the discovery order, skipping candidates that overlap an
/// already-selected shapelet from the same source. Fewer than k survivors
/// raises InsufficientCandidatesError.
ShapeletTransformResult shapelet_transform(const LabeledDataset& ds, std::size_t k,
                                           const DiscoveryParams& params);

} // namespace tskit
