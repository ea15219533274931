#include "tskit/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tskit/parallel.hpp"

namespace tskit {

namespace {

void require_equal_length(const TimeSeries& a, const TimeSeries& b) {
    if (a.size() != b.size()) {
        throw LengthMismatchError("'" + a.id() + "' has " + std::to_string(a.size()) +
                                  " values but '" + b.id() + "' has " +
                                  std::to_string(b.size()));
    }
}

// Rethrows a kernel error of the same type with the failing pair named.
[[noreturn]] void throw_with_pair(const Error& e, std::size_t i, std::size_t j) {
    const std::string ctx =
        "pair (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.message();
    if (dynamic_cast<const LengthMismatchError*>(&e)) throw LengthMismatchError(ctx);
    if (dynamic_cast<const WindowTooNarrowError*>(&e)) throw WindowTooNarrowError(ctx);
    if (dynamic_cast<const AllMissingError*>(&e)) throw AllMissingError(ctx);
    if (dynamic_cast<const NameMismatchError*>(&e)) throw NameMismatchError(ctx);
    if (dynamic_cast<const TooShortError*>(&e)) throw TooShortError(ctx);
    if (dynamic_cast<const ConstantSeriesError*>(&e)) throw ConstantSeriesError(ctx);
    if (dynamic_cast<const InvalidArgumentError*>(&e)) throw InvalidArgumentError(ctx);
    throw Error(e.code(), ctx);
}

} // namespace

DistanceKind parse_distance_kind(const std::string& name) {
    if (name == "euclid") return DistanceKind::euclid;
    if (name == "dtw") return DistanceKind::dtw;
    if (name == "cid") return DistanceKind::cid;
    if (name == "feature") return DistanceKind::feature;
    throw InvalidArgumentError("unknown distance '" + name +
                               "' (expected euclid, dtw, cid, or feature)");
}

std::string distance_kind_name(DistanceKind kind) {
    switch (kind) {
    case DistanceKind::euclid: return "euclid";
    case DistanceKind::dtw: return "dtw";
    case DistanceKind::cid: return "cid";
    case DistanceKind::feature: return "feature";
    }
    throw InvalidArgumentError("unknown distance kind");
}

double euclidean(const TimeSeries& a, const TimeSeries& b) {
    require_equal_length(a, b);
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        ss += d * d;
    }
    return std::sqrt(ss);
}

double dtw(const TimeSeries& a, const TimeSeries& b, std::optional<std::size_t> window) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t diff = n > m ? n - m : m - n;
    if (window.has_value()) {
        if (*window < diff) {
            throw WindowTooNarrowError("window " + std::to_string(*window) +
                                       " cannot reach the corner; lengths differ by " +
                                       std::to_string(diff));
        }
        if (*window > std::max(n, m) - 1) {
            throw InvalidArgumentError("window " + std::to_string(*window) +
                                       " exceeds max length - 1");
        }
    }

    const double inf = std::numeric_limits<double>::infinity();
    // Two-row dynamic program over accumulated squared costs.
    std::vector<double> prev(m + 1, inf);
    std::vector<double> curr(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        std::fill(curr.begin(), curr.end(), inf);
        std::size_t j_lo = 1;
        std::size_t j_hi = m;
        if (window.has_value()) {
            j_lo = i > *window ? i - *window : 1;
            j_hi = std::min(m, i + *window);
        }
        for (std::size_t j = j_lo; j <= j_hi; ++j) {
            const double d = a[i - 1] - b[j - 1];
            const double best = std::min({prev[j], curr[j - 1], prev[j - 1]});
            curr[j] = d * d + best;
        }
        std::swap(prev, curr);
    }
    return std::sqrt(prev[m]);
}

double cid(const TimeSeries& a, const TimeSeries& b) {
    require_equal_length(a, b);
    const double base = euclidean(a, b);
    const double ce_a = complexity_ce(a);
    const double ce_b = complexity_ce(b);
    const double hi = std::max(ce_a, ce_b);
    const double lo = std::min(ce_a, ce_b);
    double factor = 1.0;
    if (hi > 0.0) {
        factor = lo > 0.0 ? hi / lo : hi / 1e-12; // one flat series: guarded ratio
    }
    return base * factor;
}

FeatureDistanceResult feature_distance(const FeatureVector& a, const FeatureVector& b) {
    if (a.names() != b.names()) {
        throw NameMismatchError("feature vectors have different name lists");
    }
    double ss = 0.0;
    bool any = false;
    FeatureDistanceResult out{0.0, {}};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Cell& av = a.values()[i];
        const Cell& bv = b.values()[i];
        if (!av.has_value() || !bv.has_value()) {
            out.excluded.push_back(a.names()[i]);
            continue;
        }
        const double d = *av - *bv;
        ss += d * d;
        any = true;
    }
    if (!any) {
        throw AllMissingError("no shared non-missing coordinates");
    }
    out.distance = std::sqrt(ss);
    return out;
}

std::vector<std::vector<double>> pairwise_matrix(const LabeledDataset& ds,
                                                 const DistanceSpec& spec) {
    const std::size_t n = ds.size();
    std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));

    // Feature-space distances compare rows of one shared extraction.
    std::vector<FeatureVector> rows;
    if (spec.kind == DistanceKind::feature) {
        if (spec.feature_specs.empty()) {
            throw InvalidArgumentError("feature distance needs feature specs");
        }
        const FeatureMatrix fm = extract_features(ds, spec.feature_specs);
        rows.reserve(n);
        for (std::size_t i = 0; i < n; ++i) rows.push_back(fm.row(i));
    }

    auto kernel = [&](std::size_t i, std::size_t j) {
        switch (spec.kind) {
        case DistanceKind::euclid: return euclidean(ds.series(i), ds.series(j));
        case DistanceKind::dtw: return dtw(ds.series(i), ds.series(j), spec.window);
        case DistanceKind::cid: return cid(ds.series(i), ds.series(j));
        case DistanceKind::feature: return feature_distance(rows[i], rows[j]).distance;
        }
        throw InvalidArgumentError("unknown distance kind");
    };

    // Upper triangle, flattened so the work parallelizes evenly.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<double> values(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        try {
            values[p] = kernel(i, j);
        } catch (const Error& e) {
            throw_with_pair(e, i, j);
        }
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        matrix[i][j] = values[p];
        matrix[j][i] = values[p];
    }
    return matrix;
}

} // namespace tskit
