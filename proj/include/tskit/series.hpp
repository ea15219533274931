#pragma once

#include <span>
#include <string>
#include <vector>

#include "tskit/errors.hpp"

namespace tskit {

/// Uniformly sampled univariate series. Immutable after construction: values
/// keep their sampling order, every value is finite, dt > 0.
class TimeSeries {
public:
    TimeSeries(std::string id, std::vector<double> values, double dt = 1.0);

    const std::string& id() const noexcept { return id_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> span() const noexcept { return values_; }

private:
    std::string id_;
    std::vector<double> values_;
    double dt_;
};

/// Series plus one categorical label each. Series lengths may differ;
/// length-sensitive operations check and raise themselves.
class LabeledDataset {
public:
    LabeledDataset(std::vector<TimeSeries> series, std::vector<std::string> labels);

    std::size_t size() const noexcept { return series_.size(); }
    const TimeSeries& series(std::size_t i) const { return series_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    const std::vector<TimeSeries>& all_series() const noexcept { return series_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Sorted deduplication of the labels.
    const std::vector<std::string>& classes() const noexcept { return classes_; }

    LabeledDataset subset(std::span<const std::size_t> indices) const;

private:
    std::vector<TimeSeries> series_;
    std::vector<std::string> labels_;
    std::vector<std::string> classes_;
};

struct SummaryStats {
    double mean;
    double std;
    double min;
    double max;
    std::size_t n;
};

double mean_of(std::span<const double> x);
/// Unbiased sample variance, two-pass. Requires n >= 2.
double sample_variance_of(std::span<const double> x);
double sample_std_of(std::span<const double> x);

SummaryStats summary_stats(const TimeSeries& x);

/// (x - mean) / std with the unbiased std. Throws ConstantSeriesError if the
/// sample standard deviation is zero.
TimeSeries zscore(const TimeSeries& x);

} // namespace tskit
