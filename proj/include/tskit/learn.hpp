#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tskit/dictionary.hpp"
#include "tskit/distances.hpp"
#include "tskit/intervals.hpp"
#include "tskit/matrix.hpp"
#include "tskit/series.hpp"
#include "tskit/shapelets.hpp"

namespace tskit {

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::size_t fold = 0;
    std::uint64_t seed = 0;
};

/// Stratified k-fold assignment: within each class, a seeded shuffle followed
/// by round-robin dealing, so per-fold class counts differ by at most one.
std::vector<Split> stratified_folds(const std::vector<std::string>& labels,
                                    std::size_t folds, std::uint64_t seed);

/// Majority vote over the k nearest training series. Distance ties keep the
/// earlier training index; vote ties take the lexicographically smallest label.
std::string knn_classify(const LabeledDataset& train, const TimeSeries& x,
                         const DistanceSpec& spec, std::size_t k);

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const LabeledDataset& ds) = 0;
    virtual std::string predict(const TimeSeries& x) const = 0;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>()>;

struct CvResult {
    double accuracy;                     // mean over non-empty test folds
    std::vector<double> fold_accuracies; // one entry per non-empty test fold
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> confusion; // [actual][predicted], pooled
};

CvResult cross_validate(const LabeledDataset& ds, const ClassifierFactory& factory,
                        std::size_t folds, std::uint64_t seed);

struct FeatureScore {
    std::string name;
    double score;    // best single-threshold accuracy on the scored rows
    double coverage; // fraction of rows with a value
};

/// Scores every column independently and sorts descending, alphabetical on
/// ties. Columns are scored on their non-MISSING rows.
std::vector<FeatureScore> rank_features(const FeatureMatrix& fm,
                                        const std::vector<std::string>& labels);

/// Forward selection driven by CV accuracy of a nearest-centroid classifier on
/// the selected columns. Stops at max_features or when the best candidate
/// improves accuracy by <= 1e-6.
std::vector<std::string> greedy_select(const FeatureMatrix& fm,
                                       const std::vector<std::string>& labels,
                                       std::size_t max_features, std::size_t folds,
                                       std::uint64_t seed);

/// Entry (i, j) = distance(ds_i, refs_j); columns named by ref ids.
FeatureMatrix distance_feature_matrix(const LabeledDataset& ds, const LabeledDataset& refs,
                                      const DistanceSpec& spec);

// ---------------------------------------------------------------------------
// Flat transformation ensemble
// ---------------------------------------------------------------------------

enum class Representation {
    time_domain_euclid,
    time_domain_dtw,
    global_features,
    shapelet_transform,
    interval_forest,
    bag_of_patterns,
};

Representation parse_representation(const std::string& name);
std::string representation_name(Representation rep);
std::vector<Representation> all_representations();

struct EnsembleMember {
    std::string name;
    Representation representation;
    double weight = 0.0; // training CV accuracy
    std::unique_ptr<Classifier> model;
};

struct EnsemblePrediction {
    std::string label;
    std::map<std::string, double> shares; // normalized weighted votes
};

/// Each member votes its label with its weight; argmax wins, ties to the
/// lexicographically smallest label. Invariant to positive weight scaling.
EnsemblePrediction ensemble_predict(const std::vector<EnsembleMember>& members,
                                    const TimeSeries& x);

struct EnsembleConfig {
    std::vector<Representation> representations = all_representations();
    std::size_t knn_k = 1;
    std::optional<std::size_t> dtw_window;
    std::vector<FeatureSpec> features;   // empty = standard set
    std::size_t shapelet_k = 3;
    DiscoveryParams shapelet{0, 0};      // l_min 0 = derive from series length
    std::size_t n_trees = 100;
    SymbolicParams symbolic{0, 4, 4};    // window 0 = derive from series length
    std::size_t weight_folds = 5;
};

/// Fits one model per representation on the full training set and weighs it by
/// its k-fold CV training accuracy.
std::vector<EnsembleMember> fit_ensemble(const LabeledDataset& ds,
                                         const EnsembleConfig& config,
                                         std::uint64_t seed);

// Factories for the CLI and cross_validate.
ClassifierFactory knn_factory(DistanceSpec spec, std::size_t k);
ClassifierFactory forest_factory(std::size_t n_trees, std::uint64_t seed);
ClassifierFactory ensemble_factory(EnsembleConfig config, std::uint64_t seed);

} // namespace tskit
