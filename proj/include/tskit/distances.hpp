#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tskit/features.hpp"
#include "tskit/matrix.hpp"
#include "tskit/series.hpp"

namespace tskit {

enum class DistanceKind {
    euclid,
    dtw,
    cid,
    feature,
};

DistanceKind parse_distance_kind(const std::string& name);
std::string distance_kind_name(DistanceKind kind);

struct DistanceSpec {
    DistanceKind kind = DistanceKind::euclid;
    // dtw only: Sakoe-Chiba half-width, |i - j| <= window. Unset = unconstrained.
    std::optional<std::size_t> window;
    // feature only: which features to compare in.
    std::vector<FeatureSpec> feature_specs;
};

/// Equal lengths required.
double euclidean(const TimeSeries& a, const TimeSeries& b);

/// Dynamic time warping: squared pointwise costs accumulated over the optimal
/// monotone alignment of the full series, square root taken at the end.
double dtw(const TimeSeries& a, const TimeSeries& b,
           std::optional<std::size_t> window = std::nullopt);

/// Complexity-invariant distance: euclidean times max(CE)/min(CE); both CE
/// zero gives factor 1, exactly one zero divides by 1e-12 instead.
double cid(const TimeSeries& a, const TimeSeries& b);

struct FeatureDistanceResult {
    double distance;
    std::vector<std::string> excluded; // dimensions MISSING on either side
};

/// Euclidean distance in feature space over the shared non-MISSING dimensions.
/// All dimensions MISSING on one side raises AllMissingError.
FeatureDistanceResult feature_distance(const FeatureVector& a, const FeatureVector& b);

/// Symmetric with an exactly-zero diagonal; the upper triangle is computed and
/// mirrored.
std::vector<std::vector<double>> pairwise_matrix(const LabeledDataset& ds,
                                                 const DistanceSpec& spec);

} // namespace tskit
