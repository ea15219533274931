#include "tskit/series.hpp"

#include <algorithm>
#include <cmath>

namespace tskit {

TimeSeries::TimeSeries(std::string id, std::vector<double> values, double dt)
    : id_(std::move(id)), values_(std::move(values)), dt_(dt) {
    if (values_.empty()) {
        throw InvalidArgumentError("series '" + id_ + "' has no values");
    }
    if (!std::isfinite(dt_) || dt_ <= 0.0) {
        throw InvalidArgumentError("series '" + id_ + "' needs a positive finite dt");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgumentError("series '" + id_ + "' has a non-finite value at position " +
                                       std::to_string(i + 1));
        }
    }
}

LabeledDataset::LabeledDataset(std::vector<TimeSeries> series, std::vector<std::string> labels)
    : series_(std::move(series)), labels_(std::move(labels)) {
    if (series_.size() != labels_.size()) {
        throw LengthMismatchError("got " + std::to_string(series_.size()) + " series but " +
                                  std::to_string(labels_.size()) + " labels");
    }
    if (series_.empty()) {
        throw EmptyDatasetError("a dataset needs at least one series");
    }
    classes_ = labels_;
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    series.reserve(indices.size());
    labels.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= series_.size()) {
            throw InvalidArgumentError("subset index " + std::to_string(i) +
                                       " out of range for " + std::to_string(series_.size()) +
                                       " series");
        }
        series.push_back(series_[i]);
        labels.push_back(labels_[i]);
    }
    return LabeledDataset(std::move(series), std::move(labels));
}

double mean_of(std::span<const double> x) {
    if (x.empty()) throw TooShortError("mean needs at least one value");
    double sum = 0.0;
    for (double v : x) sum += v;
    return sum / static_cast<double>(x.size());
}

double sample_variance_of(std::span<const double> x) {
    if (x.size() < 2) {
        throw TooShortError("sample variance needs at least 2 values, got " +
                            std::to_string(x.size()));
    }
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) {
        const double d = v - m;
        ss += d * d;
    }
    return ss / static_cast<double>(x.size() - 1);
}

double sample_std_of(std::span<const double> x) {
    return std::sqrt(sample_variance_of(x));
}

SummaryStats summary_stats(const TimeSeries& x) {
    if (x.size() < 2) {
        throw TooShortError("summary stats need at least 2 values, got " +
                            std::to_string(x.size()));
    }
    const auto& v = x.values();
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return SummaryStats{mean_of(v), sample_std_of(v), *lo, *hi, v.size()};
}

TimeSeries zscore(const TimeSeries& x) {
    if (x.size() < 2) {
        throw TooShortError("zscore needs at least 2 values, got " + std::to_string(x.size()));
    }
    const double m = mean_of(x.values());
    const double s = sample_std_of(x.values());
    if (s == 0.0) {
        throw ConstantSeriesError("series '" + x.id() + "' has zero sample std");
    }
    std::vector<double> scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = (x[i] - m) / s;
    return TimeSeries(x.id(), std::move(scaled), x.dt());
}

} // namespace tskit
