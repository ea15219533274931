#include "tskit/shapelets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tskit/parallel.hpp"

namespace tskit {

namespace {

double entropy_bits(const std::map<std::string, std::size_t>& counts, std::size_t total) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<double> znorm_or_zero(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    const double m = mean_of(v);
    const double s = v.size() > 1 ? sample_std_of(v) : 0.0;
    for (double& x : out) x = s > 0.0 ? (x - m) / s : 0.0;
    return out;
}

// Minimum Euclidean distance over all placements, early-abandoning on the
// squared partial sums (which leaves the result bit-identical).
double min_window_distance(std::span<const double> series, std::span<const double> sub,
                           bool normalize) {
    const std::size_t l = sub.size();
    const std::size_t n = series.size();
    std::vector<double> query;
    if (normalize) {
        query = znorm_or_zero(sub);
        sub = query;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + l <= n; ++k) {
        double ss = 0.0;
        if (normalize) {
            const auto w = znorm_or_zero(series.subspan(k, l));
            for (std::size_t i = 0; i < l && ss < best; ++i) {
                const double d = w[i] - sub[i];
                ss += d * d;
            }
        } else {
            for (std::size_t i = 0; i < l && ss < best; ++i) {
                const double d = series[k + i] - sub[i];
                ss += d * d;
            }
        }
        best = std::min(best, ss);
    }
    return std::sqrt(best);
}

std::string majority_label(std::span<const std::string> labels, std::span<const double> distances,
                           double threshold, bool below) {
    std::map<std::string, std::size_t> counts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool side = distances[i] <= threshold;
        if (side == below) ++counts[labels[i]];
    }
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

struct Candidate {
    std::size_t source = 0; // dataset row
    std::size_t start = 1;  // 1-based
    std::size_t length = 0;
    double gain = 0.0;
    double margin = 0.0;
    double threshold = 0.0;
};

// Discovery preference order: gain desc, margin desc, length asc, then
// (source_id, start) asc; the dataset row disambiguates duplicate ids.
bool better(const Candidate& a, const Candidate& b, const LabeledDataset& ds) {
    if (a.gain != b.gain) return a.gain > b.gain;
    if (a.margin != b.margin) return a.margin > b.margin;
    if (a.length != b.length) return a.length < b.length;
    const std::string& ia = ds.series(a.source).id();
    const std::string& ib = ds.series(b.source).id();
    if (ia != ib) return ia < ib;
    if (a.start != b.start) return a.start < b.start;
    return a.source < b.source;
}

std::vector<Candidate> evaluate_candidates(const LabeledDataset& ds,
                                           const DiscoveryParams& params) {
    if (params.l_min < 2) throw InvalidArgumentError("l_min must be at least 2");
    if (params.l_min > params.l_max) throw InvalidArgumentError("l_min exceeds l_max");
    if (params.stride < 1) throw InvalidArgumentError("stride must be at least 1");
    std::size_t min_len = std::numeric_limits<std::size_t>::max();
    for (const auto& s : ds.all_series()) min_len = std::min(min_len, s.size());
    if (params.l_max > min_len) {
        throw TooShortError("l_max " + std::to_string(params.l_max) +
                            " exceeds the shortest series length " + std::to_string(min_len));
    }
    if (ds.classes().size() < 2) {
        throw SingleClassError("shapelet discovery needs at least 2 classes");
    }

    std::vector<Candidate> candidates;
    for (std::size_t s = 0; s < ds.size(); ++s) {
        const std::size_t n = ds.series(s).size();
        for (std::size_t l = params.l_min; l <= params.l_max; ++l) {
            for (std::size_t k = 0; k + l <= n; k += params.stride) {
                candidates.push_back(Candidate{s, k + 1, l, 0.0, 0.0, 0.0});
            }
        }
    }

    parallel_for(candidates.size(), [&](std::size_t ci) {
        Candidate& cand = candidates[ci];
        const auto sub = ds.series(cand.source).span().subspan(cand.start - 1, cand.length);
        std::vector<double> profile(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) {
            profile[i] = min_window_distance(ds.series(i).span(), sub, params.normalize_windows);
        }
        const SplitResult split = optimal_split(profile, ds.labels());
        cand.gain = split.gain;
        cand.margin = split.margin;
        cand.threshold = split.threshold;
    });
    return candidates;
}

Shapelet make_shapelet(const LabeledDataset& ds, const Candidate& cand,
                       const DiscoveryParams& params) {
    const auto& src = ds.series(cand.source);
    const auto sub = src.span().subspan(cand.start - 1, cand.length);
    std::vector<double> profile(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        profile[i] = min_window_distance(ds.series(i).span(), sub, params.normalize_windows);
    }
    Shapelet sh;
    sh.subsequence = Subsequence{{sub.begin(), sub.end()}, src.id(), cand.start};
    sh.threshold = cand.threshold;
    sh.gain = cand.gain;
    sh.margin = cand.margin;
    sh.below_label = majority_label(ds.labels(), profile, cand.threshold, true);
    sh.above_label = majority_label(ds.labels(), profile, cand.threshold, false);
    if (sh.above_label.empty()) sh.above_label = sh.below_label; // degenerate single-side split
    if (sh.below_label.empty()) sh.below_label = sh.above_label;
    return sh;
}

} // namespace

double subsequence_distance(const TimeSeries& x, std::span<const double> sub) {
    if (sub.empty()) throw InvalidArgumentError("empty subsequence");
    if (sub.size() > x.size()) {
        throw SubsequenceTooLongError("subsequence of length " + std::to_string(sub.size()) +
                                      " cannot slide over series of length " +
                                      std::to_string(x.size()));
    }
    return min_window_distance(x.span(), sub, false);
}

SplitResult optimal_split(std::span<const double> distances,
                          std::span<const std::string> labels) {
    const std::size_t n = distances.size();
    if (n != labels.size()) {
        throw LengthMismatchError("got " + std::to_string(n) + " distances but " +
                                  std::to_string(labels.size()) + " labels");
    }
    if (n < 2) throw TooShortError("a split needs at least 2 items");

    std::map<std::string, std::size_t> total_counts;
    for (const auto& l : labels) ++total_counts[l];
    if (total_counts.size() < 2) {
        throw SingleClassError("a split needs at least 2 classes");
    }
    const double total_entropy = entropy_bits(total_counts, n);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return distances[a] < distances[b];
    });

    SplitResult best{distances[order[0]], 0.0, 0.0};
    std::map<std::string, std::size_t> left_counts;
    std::size_t n_left = 0;
    bool found = false;
    for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        ++left_counts[labels[order[pos]]];
        ++n_left;
        const double lo = distances[order[pos]];
        const double hi = distances[order[pos + 1]];
        if (lo == hi) continue;

        std::map<std::string, std::size_t> right_counts;
        for (const auto& [label, c] : total_counts) {
            const auto it = left_counts.find(label);
            right_counts[label] = c - (it == left_counts.end() ? 0 : it->second);
        }
        const std::size_t n_right = n - n_left;
        const double gain = total_entropy -
                            (static_cast<double>(n_left) / static_cast<double>(n)) *
                                entropy_bits(left_counts, n_left) -
                            (static_cast<double>(n_right) / static_cast<double>(n)) *
                                entropy_bits(right_counts, n_right);
        const double margin = hi - lo;
        const double threshold = lo + margin / 2.0;
        if (!found || gain > best.gain || (gain == best.gain && margin > best.margin) ||
            (gain == best.gain && margin == best.margin && threshold < best.threshold)) {
            best = SplitResult{threshold, gain, margin};
            found = true;
        }
    }
    // All distances equal: no midpoint exists, the common value stands in.
    return best;
}

Shapelet discover_shapelet(const LabeledDataset& ds, const DiscoveryParams& params) {
    const auto candidates = evaluate_candidates(ds, params);
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (better(candidates[i], candidates[best], ds)) best = i;
    }
    return make_shapelet(ds, candidates[best], params);
}

ShapeletTransformResult shapelet_transform(const LabeledDataset& ds, std::size_t k,
                                           const DiscoveryParams& params) {
    if (k < 1) throw InvalidArgumentError("k must be at least 1");
    auto candidates = evaluate_candidates(ds, params);
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& a, const Candidate& b) { return better(a, b, ds); });

    std::vector<Candidate> kept;
    for (const auto& cand : candidates) {
        if (kept.size() == k) break;
        const bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const Candidate& c) {
            return c.source == cand.source && cand.start < c.start + c.length &&
                   c.start < cand.start + cand.length;
        });
        if (!overlaps) kept.push_back(cand);
    }
    if (kept.size() < k) {
        throw InsufficientCandidatesError("only " + std::to_string(kept.size()) + " of " +
                                          std::to_string(k) +
                                          " shapelets survive the overlap exclusion");
    }

    std::vector<Shapelet> shapelets;
    shapelets.reserve(k);
    std::vector<std::string> col_names;
    for (std::size_t j = 0; j < k; ++j) {
        shapelets.push_back(make_shapelet(ds, kept[j], params));
        const auto& sub = shapelets.back().subsequence;
        col_names.push_back("sh" + std::to_string(j + 1) + "_" + sub.source_id + "_s" +
                            std::to_string(sub.start) + "_l" + std::to_string(sub.values.size()));
    }

    std::vector<Cell> cells(ds.size() * k);
    parallel_for(ds.size() * k, [&](std::size_t flat) {
        const std::size_t i = flat / k;
        const std::size_t j = flat % k;
        cells[flat] = min_window_distance(ds.series(i).span(), shapelets[j].subsequence.values,
                                          params.normalize_windows);
    });
    std::vector<std::string> row_ids;
    row_ids.reserve(ds.size());
    for (const auto& s : ds.all_series()) row_ids.push_back(s.id());
    return ShapeletTransformResult{
        std::move(shapelets),
        FeatureMatrix(std::move(row_ids), std::move(col_names), std::move(cells))};
}

} // namespace tskit
