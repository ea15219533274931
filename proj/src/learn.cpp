#include "tskit/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "tskit/parallel.hpp"
#include "tskit/rng.hpp"

namespace tskit {

namespace {

constexpr double kSelectionEps = 1e-6;
constexpr double kMaxMissingFrac = 0.2; // columns above this are dropped at fit

std::string majority_of(const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> counts;
    for (const auto& label : labels) ++counts[label];
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

// Majority among the k smallest distances; distance ties keep the earlier
// index, vote ties the lexicographically smallest label.
std::string vote_knn(const std::vector<double>& distances, const std::vector<std::string>& labels,
                     std::size_t k) {
    if (k < 1) throw InvalidArgumentError("k must be at least 1");
    if (k > distances.size()) {
        throw InvalidArgumentError("k = " + std::to_string(k) + " exceeds the " +
                                   std::to_string(distances.size()) + " training series");
    }
    std::vector<std::size_t> order(distances.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (distances[a] != distances[b]) return distances[a] < distances[b];
        return a < b;
    });
    std::map<std::string, std::size_t> votes;
    for (std::size_t i = 0; i < k; ++i) ++votes[labels[order[i]]];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, c] : votes) {
        if (c > best_count) {
            best = label;
            best_count = c;
        }
    }
    return best;
}

std::vector<Cell> features_of(const TimeSeries& x, const std::vector<FeatureSpec>& specs) {
    std::vector<Cell> out(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        try {
            out[i] = evaluate_feature(specs[i], x);
        } catch (const Error&) {
            out[i] = std::nullopt;
        }
    }
    return out;
}

double pair_distance(const DistanceSpec& spec, const TimeSeries& a, const TimeSeries& b) {
    switch (spec.kind) {
    case DistanceKind::euclid: return euclidean(a, b);
    case DistanceKind::dtw: return dtw(a, b, spec.window);
    case DistanceKind::cid: return cid(a, b);
    case DistanceKind::feature: {
        if (spec.feature_specs.empty()) {
            throw InvalidArgumentError("feature distance needs feature specs");
        }
        std::vector<std::string> names;
        names.reserve(spec.feature_specs.size());
        for (const auto& fs : spec.feature_specs) names.push_back(fs.name);
        FeatureVector fa(names, features_of(a, spec.feature_specs));
        FeatureVector fb(std::move(names), features_of(b, spec.feature_specs));
        return feature_distance(fa, fb).distance;
    }
    }
    throw InvalidArgumentError("unknown distance kind");
}

// ---------------------------------------------------------------------------
// Feature pipeline: drop sparse columns, impute the train median, z-score with
// train statistics. Fitted on training rows only.
// ---------------------------------------------------------------------------

struct FeaturePipeline {
    std::vector<std::size_t> kept; // original column indices
    std::vector<double> medians;
    std::vector<double> means;
    std::vector<double> stds; // zero pins the dimension to 0
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

FeaturePipeline fit_pipeline(const FeatureMatrix& fm, std::span<const std::size_t> rows,
                             std::span<const std::size_t> cols) {
    FeaturePipeline pipe;
    for (std::size_t c : cols) {
        std::vector<double> present;
        present.reserve(rows.size());
        for (std::size_t r : rows) {
            if (const Cell& cell = fm.at(r, c)) present.push_back(*cell);
        }
        const double missing_frac =
            1.0 - static_cast<double>(present.size()) / static_cast<double>(rows.size());
        if (missing_frac > kMaxMissingFrac) continue;
        const double median = median_of(present);
        std::vector<double> imputed;
        imputed.reserve(rows.size());
        for (std::size_t r : rows) {
            const Cell& cell = fm.at(r, c);
            imputed.push_back(cell ? *cell : median);
        }
        pipe.kept.push_back(c);
        pipe.medians.push_back(median);
        pipe.means.push_back(mean_of(imputed));
        pipe.stds.push_back(imputed.size() > 1 ? sample_std_of(imputed) : 0.0);
    }
    return pipe;
}

// `cells` is a full-width row in the pipeline's source column order.
std::vector<double> transform_cells(const FeaturePipeline& pipe, const std::vector<Cell>& cells) {
    std::vector<double> out(pipe.kept.size());
    for (std::size_t i = 0; i < pipe.kept.size(); ++i) {
        const Cell& cell = cells[pipe.kept[i]];
        const double v = cell ? *cell : pipe.medians[i];
        out[i] = pipe.stds[i] > 0.0 ? (v - pipe.means[i]) / pipe.stds[i] : 0.0;
    }
    return out;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        ss += d * d;
    }
    return ss;
}

// ---------------------------------------------------------------------------
// Concrete classifiers
// ---------------------------------------------------------------------------

class KnnSeriesClassifier final : public Classifier {
public:
    KnnSeriesClassifier(DistanceSpec spec, std::size_t k) : spec_(std::move(spec)), k_(k) {}

    void fit(const LabeledDataset& ds) override { train_.emplace(ds); }

    std::string predict(const TimeSeries& x) const override {
        require_fitted(train_.has_value());
        return knn_classify(*train_, x, spec_, k_);
    }

private:
    static void require_fitted(bool fitted) {
        if (!fitted) throw InvalidArgumentError("classifier used before fit");
    }

    DistanceSpec spec_;
    std::size_t k_;
    std::optional<LabeledDataset> train_;
};

// Shared by every classifier that predicts with k-NN in a pipelined feature
// space; derived classes supply the raw feature row for a series.
class PipelinedKnnClassifier : public Classifier {
public:
    explicit PipelinedKnnClassifier(std::size_t k) : k_(k) {}

    std::string predict(const TimeSeries& x) const override {
        if (labels_.empty()) throw InvalidArgumentError("classifier used before fit");
        if (pipe_.kept.empty()) return fallback_;
        std::vector<double> point = transform_cells(pipe_, raw_features(x));
        std::vector<double> distances(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            distances[i] = std::sqrt(squared_distance(rows_[i], point));
        }
        return vote_knn(distances, labels_, k_);
    }

protected:
    void fit_space(const FeatureMatrix& fm, const std::vector<std::string>& labels) {
        std::vector<std::size_t> rows(fm.rows());
        std::iota(rows.begin(), rows.end(), 0);
        std::vector<std::size_t> cols(fm.cols());
        std::iota(cols.begin(), cols.end(), 0);
        pipe_ = fit_pipeline(fm, rows, cols);
        rows_.clear();
        rows_.reserve(fm.rows());
        for (std::size_t i = 0; i < fm.rows(); ++i) {
            rows_.push_back(transform_cells(pipe_, fm.row(i).values()));
        }
        labels_ = labels;
        fallback_ = majority_of(labels);
    }

    virtual std::vector<Cell> raw_features(const TimeSeries& x) const = 0;

private:
    std::size_t k_;
    FeaturePipeline pipe_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::string> labels_;
    std::string fallback_;
};

class KnnFeatureClassifier final : public PipelinedKnnClassifier {
public:
    KnnFeatureClassifier(std::vector<FeatureSpec> specs, std::size_t k)
        : PipelinedKnnClassifier(k), specs_(std::move(specs)) {
        if (specs_.empty()) throw InvalidArgumentError("feature classifier needs feature specs");
    }

    void fit(const LabeledDataset& ds) override {
        fit_space(extract_features(ds, specs_), ds.labels());
    }

private:
    std::vector<Cell> raw_features(const TimeSeries& x) const override {
        return features_of(x, specs_);
    }

    std::vector<FeatureSpec> specs_;
};

// Minimum Euclidean distance over all placements of `sub` in x, matching the
// shapelet transform's window handling.
double min_placement_distance(const TimeSeries& x, std::span<const double> sub, bool normalize) {
    const std::size_t l = sub.size();
    if (l > x.size()) {
        throw SubsequenceTooLongError("subsequence of length " + std::to_string(l) +
                                      " exceeds series of length " + std::to_string(x.size()));
    }
    std::vector<double> query(sub.begin(), sub.end());
    if (normalize) {
        const double m = mean_of(query);
        const double s = query.size() > 1 ? sample_std_of(query) : 0.0;
        for (double& v : query) v = s > 0.0 ? (v - m) / s : 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    const auto span = x.span();
    for (std::size_t k = 0; k + l <= span.size(); ++k) {
        double ss = 0.0;
        if (normalize) {
            const auto w = span.subspan(k, l);
            const double m = mean_of(w);
            const double s = w.size() > 1 ? sample_std_of(w) : 0.0;
            for (std::size_t i = 0; i < l; ++i) {
                const double z = s > 0.0 ? (w[i] - m) / s : 0.0;
                const double d = z - query[i];
                ss += d * d;
            }
        } else {
            for (std::size_t i = 0; i < l; ++i) {
                const double d = span[k + i] - query[i];
                ss += d * d;
            }
        }
        best = std::min(best, ss);
    }
    return std::sqrt(best);
}

class ShapeletClassifier final : public PipelinedKnnClassifier {
public:
    ShapeletClassifier(std::size_t top_k, DiscoveryParams params, std::size_t k)
        : PipelinedKnnClassifier(k), top_k_(top_k), params_(params) {}

    void fit(const LabeledDataset& ds) override {
        if (params_.l_min == 0) {
            std::size_t min_len = std::numeric_limits<std::size_t>::max();
            for (const auto& s : ds.all_series()) min_len = std::min(min_len, s.size());
            params_.l_min = std::max<std::size_t>(2, min_len / 8);
            params_.l_max = std::max(params_.l_min, min_len / 4);
        }
        ShapeletTransformResult result = shapelet_transform(ds, top_k_, params_);
        shapelets_ = std::move(result.shapelets);
        fit_space(result.features, ds.labels());
    }

private:
    std::vector<Cell> raw_features(const TimeSeries& x) const override {
        std::vector<Cell> out(shapelets_.size());
        for (std::size_t j = 0; j < shapelets_.size(); ++j) {
            out[j] = min_placement_distance(x, shapelets_[j].subsequence.values,
                                            params_.normalize_windows);
        }
        return out;
    }

    std::size_t top_k_;
    DiscoveryParams params_;
    std::vector<Shapelet> shapelets_;
};

class ForestClassifier final : public Classifier {
public:
    ForestClassifier(std::size_t n_trees, std::uint64_t seed) : n_trees_(n_trees), seed_(seed) {}

    void fit(const LabeledDataset& ds) override { forest_ = train_forest(ds, n_trees_, seed_); }

    std::string predict(const TimeSeries& x) const override {
        if (!forest_) throw InvalidArgumentError("classifier used before fit");
        return forest_predict(*forest_, x);
    }

private:
    std::size_t n_trees_;
    std::uint64_t seed_;
    std::optional<IntervalForest> forest_;
};

class BagOfPatternsClassifier final : public Classifier {
public:
    BagOfPatternsClassifier(SymbolicParams params, std::size_t k) : params_(params), k_(k) {}

    void fit(const LabeledDataset& ds) override {
        if (params_.window == 0) {
            std::size_t min_len = std::numeric_limits<std::size_t>::max();
            for (const auto& s : ds.all_series()) min_len = std::min(min_len, s.size());
            const std::size_t l = params_.word_length;
            std::size_t target = std::max(l, min_len / 4);
            target -= target % l; // largest multiple of the word length
            params_.window = std::min(target, min_len);
        }
        histograms_.clear();
        histograms_.reserve(ds.size());
        for (const auto& s : ds.all_series()) histograms_.push_back(bag_of_patterns(s, params_));
        labels_ = ds.labels();
    }

    std::string predict(const TimeSeries& x) const override {
        if (labels_.empty()) throw InvalidArgumentError("classifier used before fit");
        const PatternHistogram hist = bag_of_patterns(x, params_);
        std::vector<double> distances(histograms_.size());
        for (std::size_t i = 0; i < histograms_.size(); ++i) {
            distances[i] = histogram_distance(histograms_[i], hist);
        }
        return vote_knn(distances, labels_, k_);
    }

private:
    SymbolicParams params_;
    std::size_t k_;
    std::vector<PatternHistogram> histograms_;
    std::vector<std::string> labels_;
};

std::unique_ptr<Classifier> make_member(Representation rep, const EnsembleConfig& config,
                                        std::uint64_t seed) {
    switch (rep) {
    case Representation::time_domain_euclid:
        return std::make_unique<KnnSeriesClassifier>(DistanceSpec{DistanceKind::euclid, {}, {}},
                                                     config.knn_k);
    case Representation::time_domain_dtw:
        return std::make_unique<KnnSeriesClassifier>(
            DistanceSpec{DistanceKind::dtw, config.dtw_window, {}}, config.knn_k);
    case Representation::global_features:
        return std::make_unique<KnnFeatureClassifier>(
            config.features.empty() ? standard_feature_set() : config.features, config.knn_k);
    case Representation::shapelet_transform:
        return std::make_unique<ShapeletClassifier>(config.shapelet_k, config.shapelet,
                                                    config.knn_k);
    case Representation::interval_forest:
        return std::make_unique<ForestClassifier>(config.n_trees, seed);
    case Representation::bag_of_patterns:
        return std::make_unique<BagOfPatternsClassifier>(config.symbolic, config.knn_k);
    }
    throw InvalidArgumentError("unknown representation");
}

} // namespace

std::vector<Split> stratified_folds(const std::vector<std::string>& labels, std::size_t folds,
                                    std::uint64_t seed) {
    if (labels.empty()) throw EmptyDatasetError("no labels to fold");
    if (folds < 2) throw InvalidArgumentError("folds must be at least 2");

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::vector<Split> splits(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        splits[f].fold = f;
        splits[f].seed = seed;
    }

    std::size_t class_index = 0;
    for (auto& [label, indices] : by_class) {
        Rng rng(seed, class_index++);
        rng.shuffle(indices);
        for (std::size_t q = 0; q < indices.size(); ++q) {
            splits[q % folds].test.push_back(indices[q]);
        }
    }
    for (auto& split : splits) {
        std::sort(split.test.begin(), split.test.end());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!std::binary_search(split.test.begin(), split.test.end(), i)) {
                split.train.push_back(i);
            }
        }
    }
    return splits;
}

std::string knn_classify(const LabeledDataset& train, const TimeSeries& x,
                         const DistanceSpec& spec, std::size_t k) {
    std::vector<double> distances(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        distances[i] = pair_distance(spec, train.series(i), x);
    }
    return vote_knn(distances, train.labels(), k);
}

CvResult cross_validate(const LabeledDataset& ds, const ClassifierFactory& factory,
                        std::size_t folds, std::uint64_t seed) {
    if (ds.classes().size() < 2) throw SingleClassError("cross-validation needs at least 2 classes");
    const std::vector<Split> splits = stratified_folds(ds.labels(), folds, seed);

    const std::vector<std::string>& classes = ds.classes();
    std::map<std::string, std::size_t> class_index;
    for (std::size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = c;

    struct FoldOutcome {
        std::size_t correct = 0;
        std::size_t total = 0;
        std::vector<std::vector<std::size_t>> confusion;
    };
    std::vector<FoldOutcome> outcomes(splits.size());

    parallel_for(splits.size(), [&](std::size_t f) {
        const Split& split = splits[f];
        if (split.test.empty() || split.train.empty()) return;
        FoldOutcome& out = outcomes[f];
        out.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
        const LabeledDataset train = ds.subset(split.train);
        std::unique_ptr<Classifier> model = factory();
        model->fit(train);
        for (std::size_t i : split.test) {
            const std::string predicted = model->predict(ds.series(i));
            const auto it = class_index.find(predicted);
            if (it == class_index.end()) {
                throw NameMismatchError("prediction '" + predicted + "' is not a dataset class");
            }
            ++out.confusion[class_index.at(ds.label(i))][it->second];
            if (predicted == ds.label(i)) ++out.correct;
            ++out.total;
        }
    });

    CvResult result;
    result.classes = classes;
    result.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
    double sum = 0.0;
    for (const FoldOutcome& out : outcomes) {
        if (out.total == 0) continue;
        const double acc = static_cast<double>(out.correct) / static_cast<double>(out.total);
        result.fold_accuracies.push_back(acc);
        sum += acc;
        for (std::size_t a = 0; a < classes.size(); ++a) {
            for (std::size_t p = 0; p < classes.size(); ++p) {
                result.confusion[a][p] += out.confusion[a][p];
            }
        }
    }
    result.accuracy = result.fold_accuracies.empty()
                          ? 0.0
                          : sum / static_cast<double>(result.fold_accuracies.size());
    return result;
}

std::vector<FeatureScore> rank_features(const FeatureMatrix& fm,
                                        const std::vector<std::string>& labels) {
    if (labels.size() != fm.rows()) {
        throw LengthMismatchError("expected " + std::to_string(fm.rows()) + " labels, got " +
                                  std::to_string(labels.size()));
    }
    const std::set<std::string> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2) throw SingleClassError("ranking needs at least 2 classes");

    std::vector<FeatureScore> scores(fm.cols());
    parallel_for(fm.cols(), [&](std::size_t c) {
        std::vector<std::pair<double, std::string>> present; // (value, label)
        for (std::size_t r = 0; r < fm.rows(); ++r) {
            if (const Cell& cell = fm.at(r, c)) present.emplace_back(*cell, labels[r]);
        }
        const double coverage =
            static_cast<double>(present.size()) / static_cast<double>(fm.rows());
        if (present.empty()) {
            scores[c] = FeatureScore{fm.col_names()[c], 0.0, 0.0};
            return;
        }
        std::sort(present.begin(), present.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::size_t n = present.size();

        std::map<std::string, std::size_t> right;
        for (const auto& [value, label] : present) ++right[label];
        std::size_t majority = 0;
        for (const auto& [label, count] : right) majority = std::max(majority, count);
        double best = static_cast<double>(majority) / static_cast<double>(n);

        // Sweep every threshold between distinct values; each side predicts
        // its own majority.
        std::map<std::string, std::size_t> left;
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            const std::string& label = present[pos].second;
            ++left[label];
            --right[label];
            if (present[pos].first == present[pos + 1].first) continue;
            std::size_t max_left = 0;
            std::size_t max_right = 0;
            for (const auto& [l, count] : left) max_left = std::max(max_left, count);
            for (const auto& [l, count] : right) max_right = std::max(max_right, count);
            best = std::max(best, static_cast<double>(max_left + max_right) /
                                      static_cast<double>(n));
        }
        scores[c] = FeatureScore{fm.col_names()[c], best, coverage};
    });

    std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.name < b.name;
    });
    return scores;
}

namespace {

// Nearest-centroid accuracy over the folds, features pipelined per train fold.
double centroid_cv_accuracy(const FeatureMatrix& fm, const std::vector<std::string>& labels,
                            const std::vector<Split>& splits,
                            const std::vector<std::size_t>& cols) {
    double sum = 0.0;
    std::size_t used_folds = 0;
    for (const Split& split : splits) {
        if (split.test.empty()) continue;
        const FeaturePipeline pipe = fit_pipeline(fm, split.train, cols);

        std::string fallback;
        std::map<std::string, std::vector<double>> centroids;
        if (pipe.kept.empty()) {
            std::vector<std::string> train_labels;
            for (std::size_t r : split.train) train_labels.push_back(labels[r]);
            fallback = majority_of(train_labels);
        } else {
            std::map<std::string, std::size_t> counts;
            for (std::size_t r : split.train) {
                const std::vector<double> v = transform_cells(pipe, fm.row(r).values());
                auto& centroid = centroids[labels[r]];
                if (centroid.empty()) centroid.assign(v.size(), 0.0);
                for (std::size_t i = 0; i < v.size(); ++i) centroid[i] += v[i];
                ++counts[labels[r]];
            }
            for (auto& [label, centroid] : centroids) {
                for (double& v : centroid) v /= static_cast<double>(counts[label]);
            }
        }

        std::size_t correct = 0;
        for (std::size_t r : split.test) {
            std::string predicted;
            if (pipe.kept.empty()) {
                predicted = fallback;
            } else {
                const std::vector<double> v = transform_cells(pipe, fm.row(r).values());
                double best = std::numeric_limits<double>::infinity();
                for (const auto& [label, centroid] : centroids) {
                    const double d = squared_distance(v, centroid);
                    if (d < best) { // map order resolves ties lexicographically
                        best = d;
                        predicted = label;
                    }
                }
            }
            if (predicted == labels[r]) ++correct;
        }
        sum += static_cast<double>(correct) / static_cast<double>(split.test.size());
        ++used_folds;
    }
    return sum / static_cast<double>(used_folds);
}

} // namespace

std::vector<std::string> greedy_select(const FeatureMatrix& fm,
                                       const std::vector<std::string>& labels,
                                       std::size_t max_features, std::size_t folds,
                                       std::uint64_t seed) {
    if (labels.size() != fm.rows()) {
        throw LengthMismatchError("expected " + std::to_string(fm.rows()) + " labels, got " +
                                  std::to_string(labels.size()));
    }
    const std::set<std::string> distinct(labels.begin(), labels.end());
    if (distinct.size() < 2) throw SingleClassError("selection needs at least 2 classes");
    if (max_features == 0) return {};

    const std::vector<Split> splits = stratified_folds(labels, folds, seed);

    std::vector<std::size_t> selected;
    std::vector<std::string> selected_names;
    double current = 0.0;
    while (selected.size() < std::min<std::size_t>(max_features, fm.cols())) {
        std::vector<std::size_t> candidates;
        for (std::size_t c = 0; c < fm.cols(); ++c) {
            if (std::find(selected.begin(), selected.end(), c) == selected.end()) {
                candidates.push_back(c);
            }
        }
        std::vector<double> accuracy(candidates.size());
        parallel_for(candidates.size(), [&](std::size_t i) {
            std::vector<std::size_t> cols = selected;
            cols.push_back(candidates[i]);
            accuracy[i] = centroid_cv_accuracy(fm, labels, splits, cols);
        });

        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i) {
            const std::string& name = fm.col_names()[candidates[i]];
            const std::string& best_name = fm.col_names()[candidates[best]];
            if (accuracy[i] > accuracy[best] ||
                (accuracy[i] == accuracy[best] && name < best_name)) {
                best = i;
            }
        }
        if (accuracy[best] <= current + kSelectionEps) break;
        current = accuracy[best];
        selected.push_back(candidates[best]);
        selected_names.push_back(fm.col_names()[candidates[best]]);
    }
    return selected_names;
}

FeatureMatrix distance_feature_matrix(const LabeledDataset& ds, const LabeledDataset& refs,
                                      const DistanceSpec& spec) {
    std::vector<std::string> row_ids;
    row_ids.reserve(ds.size());
    for (const auto& s : ds.all_series()) row_ids.push_back(s.id());
    std::vector<std::string> col_names;
    col_names.reserve(refs.size());
    for (const auto& s : refs.all_series()) col_names.push_back(s.id());

    // Feature-space distances reuse one extraction per side.
    std::vector<FeatureVector> ds_rows;
    std::vector<FeatureVector> ref_rows;
    if (spec.kind == DistanceKind::feature) {
        if (spec.feature_specs.empty()) {
            throw InvalidArgumentError("feature distance needs feature specs");
        }
        const FeatureMatrix a = extract_features(ds, spec.feature_specs);
        const FeatureMatrix b = extract_features(refs, spec.feature_specs);
        for (std::size_t i = 0; i < ds.size(); ++i) ds_rows.push_back(a.row(i));
        for (std::size_t j = 0; j < refs.size(); ++j) ref_rows.push_back(b.row(j));
    }

    std::vector<Cell> cells(ds.size() * refs.size());
    parallel_for(ds.size() * refs.size(), [&](std::size_t at) {
        const std::size_t i = at / refs.size();
        const std::size_t j = at % refs.size();
        if (spec.kind == DistanceKind::feature) {
            cells[at] = feature_distance(ds_rows[i], ref_rows[j]).distance;
        } else {
            cells[at] = pair_distance(spec, ds.series(i), refs.series(j));
        }
    });
    return FeatureMatrix(std::move(row_ids), std::move(col_names), std::move(cells));
}

Representation parse_representation(const std::string& name) {
    for (Representation rep : all_representations()) {
        if (representation_name(rep) == name) return rep;
    }
    throw InvalidArgumentError("unknown representation '" + name + "'");
}

std::string representation_name(Representation rep) {
    switch (rep) {
    case Representation::time_domain_euclid: return "time-domain-euclid";
    case Representation::time_domain_dtw: return "time-domain-dtw";
    case Representation::global_features: return "global-features";
    case Representation::shapelet_transform: return "shapelet-transform";
    case Representation::interval_forest: return "interval-forest";
    case Representation::bag_of_patterns: return "bag-of-patterns";
    }
    throw InvalidArgumentError("unknown representation");
}

std::vector<Representation> all_representations() {
    return {Representation::time_domain_euclid, Representation::time_domain_dtw,
            Representation::global_features,    Representation::shapelet_transform,
            Representation::interval_forest,    Representation::bag_of_patterns};
}

EnsemblePrediction ensemble_predict(const std::vector<EnsembleMember>& members,
                                    const TimeSeries& x) {
    if (members.empty()) throw NoMembersError("ensemble has no members");
    double total = 0.0;
    for (const auto& member : members) {
        if (member.weight < 0.0) throw InvalidArgumentError("member weights must be nonnegative");
        total += member.weight;
    }
    if (total <= 0.0) throw NoMembersError("every ensemble member has zero weight");

    std::vector<std::string> votes(members.size());
    parallel_for(members.size(), [&](std::size_t i) { votes[i] = members[i].model->predict(x); });

    EnsemblePrediction out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        out.shares[votes[i]] += members[i].weight / total;
    }
    double best = -1.0;
    for (const auto& [label, share] : out.shares) { // map order: ties go lexicographically
        if (share > best) {
            best = share;
            out.label = label;
        }
    }
    return out;
}

std::vector<EnsembleMember> fit_ensemble(const LabeledDataset& ds, const EnsembleConfig& config,
                                         std::uint64_t seed) {
    if (config.representations.empty()) throw NoMembersError("no representations configured");
    if (ds.classes().size() < 2) throw SingleClassError("ensemble training needs at least 2 classes");

    std::vector<EnsembleMember> members(config.representations.size());
    parallel_for(config.representations.size(), [&](std::size_t i) {
        const Representation rep = config.representations[i];
        const CvResult cv = cross_validate(
            ds, [&] { return make_member(rep, config, seed); }, config.weight_folds, seed);
        std::unique_ptr<Classifier> model = make_member(rep, config, seed);
        model->fit(ds);
        members[i] = EnsembleMember{representation_name(rep), rep, cv.accuracy, std::move(model)};
    });
    return members;
}

ClassifierFactory knn_factory(DistanceSpec spec, std::size_t k) {
    if (k < 1) throw InvalidArgumentError("k must be at least 1");
    return [spec, k]() -> std::unique_ptr<Classifier> {
        if (spec.kind == DistanceKind::feature) {
            return std::make_unique<KnnFeatureClassifier>(spec.feature_specs, k);
        }
        return std::make_unique<KnnSeriesClassifier>(spec, k);
    };
}

ClassifierFactory forest_factory(std::size_t n_trees, std::uint64_t seed) {
    return [n_trees, seed] { return std::make_unique<ForestClassifier>(n_trees, seed); };
}

ClassifierFactory ensemble_factory(EnsembleConfig config, std::uint64_t seed) {
    struct EnsembleClassifier final : Classifier {
        EnsembleClassifier(EnsembleConfig config, std::uint64_t seed)
            : config_(std::move(config)), seed_(seed) {}
        void fit(const LabeledDataset& ds) override {
            members_ = fit_ensemble(ds, config_, seed_);
        }
        std::string predict(const TimeSeries& x) const override {
            return ensemble_predict(members_, x).label;
        }
        EnsembleConfig config_;
        std::uint64_t seed_;
        std::vector<EnsembleMember> members_;
    };
    return [config = std::move(config), seed] {
        return std::make_unique<EnsembleClassifier>(config, seed);
    };
}

} // namespace tskit
