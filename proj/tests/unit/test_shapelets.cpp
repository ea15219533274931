#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "tskit/errors.hpp"
#include "tskit/shapelets.hpp"

using namespace tskit;
using testutil::make_series;

namespace {

// Per-offset full accumulation, no early abandoning.
double scan_oracle(const std::vector<double>& x, const std::vector<double>& sub) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + sub.size() <= x.size(); ++k) {
        double ss = 0.0;
        for (std::size_t i = 0; i < sub.size(); ++i) {
            const double d = x[k + i] - sub[i];
            ss += d * d;
        }
        best = std::min(best, ss);
    }
    return std::sqrt(best);
}

double entropy_oracle(const std::map<std::string, std::size_t>& counts, std::size_t total) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

// Independent midpoint enumeration with the documented tie rules.
SplitResult split_oracle(const std::vector<double>& distances,
                         const std::vector<std::string>& labels) {
    const std::size_t n = distances.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });

    std::map<std::string, std::size_t> total;
    for (const auto& l : labels) ++total[l];
    const double h_all = entropy_oracle(total, n);

    SplitResult best{distances[order[0]], 0.0, 0.0};
    bool found = false;
    std::map<std::string, std::size_t> left;
    for (std::size_t pos = 0; pos + 1 < n; ++pos) {
        ++left[labels[order[pos]]];
        if (distances[order[pos]] == distances[order[pos + 1]]) continue;
        std::map<std::string, std::size_t> right = total;
        for (const auto& [label, c] : left) right[label] -= c;
        const std::size_t nl = pos + 1;
        const std::size_t nr = n - nl;
        const double gain =
            h_all - (static_cast<double>(nl) / n) * entropy_oracle(left, nl) -
            (static_cast<double>(nr) / n) * entropy_oracle(right, nr);
        const double margin = distances[order[pos + 1]] - distances[order[pos]];
        const double threshold = distances[order[pos]] + margin / 2.0;
        const bool wins = !found || gain > best.gain ||
                          (gain == best.gain && margin > best.margin) ||
                          (gain == best.gain && margin == best.margin &&
                           threshold < best.threshold);
        if (wins) {
            best = SplitResult{threshold, gain, margin};
            found = true;
        }
    }
    return best;
}

struct OracleWinner {
    std::string source_id;
    std::size_t row;
    std::size_t start; // 1-based
    std::size_t length;
    SplitResult split;
};

// Full reimplementation of discovery for small inputs.
OracleWinner discovery_oracle(const LabeledDataset& ds, const DiscoveryParams& params) {
    OracleWinner best{};
    bool have = false;
    for (std::size_t s = 0; s < ds.size(); ++s) {
        const auto& values = ds.series(s).values();
        for (std::size_t l = params.l_min; l <= params.l_max; ++l) {
            for (std::size_t k = 0; k + l <= values.size(); k += params.stride) {
                const std::vector<double> sub(values.begin() + k, values.begin() + k + l);
                std::vector<double> profile(ds.size());
                for (std::size_t i = 0; i < ds.size(); ++i) {
                    profile[i] = scan_oracle(ds.series(i).values(), sub);
                }
                const SplitResult split = split_oracle(profile, ds.labels());
                OracleWinner cand{ds.series(s).id(), s, k + 1, l, split};
                const auto better = [&]() {
                    if (cand.split.gain != best.split.gain)
                        return cand.split.gain > best.split.gain;
                    if (cand.split.margin != best.split.margin)
                        return cand.split.margin > best.split.margin;
                    if (cand.length != best.length) return cand.length < best.length;
                    if (cand.source_id != best.source_id) return cand.source_id < best.source_id;
                    if (cand.start != best.start) return cand.start < best.start;
                    return cand.row < best.row;
                };
                if (!have || better()) {
                    best = cand;
                    have = true;
                }
            }
        }
    }
    return best;
}

// Flat noise everywhere; the "bump" class carries a planted triangular bump.
LabeledDataset planted_bump(std::size_t per_class, std::size_t n, std::size_t bump_len,
                            std::uint64_t seed, std::vector<std::size_t>* bump_starts = nullptr) {
    tskit::Rng rng(seed);
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        std::vector<double> v(n);
        for (double& x : v) x = 0.1 * rng.normal();
        const bool bumpy = i < per_class;
        if (bumpy) {
            const std::size_t start = rng.uniform_int(0, n - bump_len);
            const double c = (static_cast<double>(bump_len) - 1.0) / 2.0;
            for (std::size_t j = 0; j < bump_len; ++j) {
                v[start + j] += 3.0 * (1.0 - std::abs(static_cast<double>(j) - c) / (c + 1.0));
            }
            if (bump_starts != nullptr) bump_starts->push_back(start + 1);
        }
        series.push_back(make_series(std::move(v), "s" + std::to_string(i)));
        labels.push_back(bumpy ? "bump" : "flat");
    }
    return LabeledDataset(std::move(series), std::move(labels));
}

std::vector<double> znorm_oracle(const std::vector<double>& v) {
    const double m = mean_of(v);
    const double s = sample_std_of(v);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s > 0.0 ? (v[i] - m) / s : 0.0;
    return out;
}

} // namespace

TEST_SUITE("shapelets") {

TEST_CASE("subsequence distance finds an exact occurrence") {
    const std::vector<double> sub{1, 2};
    CHECK(subsequence_distance(make_series({0, 0, 1, 2, 0}), sub) == 0.0);
}

TEST_CASE("subsequence distance rejects an over-long query") {
    const std::vector<double> sub{1, 2, 3, 4, 5, 6};
    CHECK_THROWS_AS(subsequence_distance(make_series({1, 2, 3, 4, 5}), sub),
                    SubsequenceTooLongError);
    CHECK_THROWS_AS(subsequence_distance(make_series({1, 2, 3}), std::vector<double>{}),
                    InvalidArgumentError);
}

TEST_CASE("subsequence distance equals the exhaustive scan at every offset") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::vector<double> x = testutil::gaussian_values(32, 100 + seed);
        const std::vector<double> sub = testutil::gaussian_values(4, 200 + seed);
        CHECK(subsequence_distance(make_series(x), sub) == scan_oracle(x, sub));
    }
}

TEST_CASE("appending samples can only keep or lower the distance") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::vector<double> x = testutil::gaussian_values(20, 300 + seed);
        const std::vector<double> sub = testutil::gaussian_values(5, 400 + seed);
        std::vector<double> longer = x;
        const std::vector<double> tail = testutil::gaussian_values(6, 500 + seed);
        longer.insert(longer.end(), tail.begin(), tail.end());
        CHECK(subsequence_distance(make_series(longer), sub) <=
              subsequence_distance(make_series(x), sub));
    }
}

TEST_CASE("optimal split of a cleanly separated quartet") {
    const std::vector<double> d{1, 2, 9, 10};
    const std::vector<std::string> l{"A", "A", "B", "B"};
    const SplitResult r = optimal_split(d, l);
    CHECK(r.gain == 1.0);
    CHECK(r.threshold == 5.5);
    CHECK(r.margin == 7.0);
}

TEST_CASE("optimal split needs two classes and two items") {
    const std::vector<double> d{1, 2, 3};
    const std::vector<std::string> l{"A", "A", "A"};
    CHECK_THROWS_AS(optimal_split(d, l), SingleClassError);
    const std::vector<double> one{1};
    const std::vector<std::string> lone{"A"};
    CHECK_THROWS_AS(optimal_split(one, lone), TooShortError);
    const std::vector<std::string> two{"A", "B"};
    CHECK_THROWS_AS(optimal_split(one, two), LengthMismatchError);
}

TEST_CASE("optimal split matches the exhaustive threshold oracle") {
    const std::vector<double> interleaved{1, 2, 3, 4};
    const std::vector<std::string> labels{"A", "B", "A", "B"};
    const SplitResult got = optimal_split(interleaved, labels);
    const SplitResult want = split_oracle(interleaved, labels);
    CHECK(got.threshold == want.threshold);
    CHECK(got.gain == doctest::Approx(want.gain).epsilon(1e-12));
    CHECK(got.margin == want.margin);

    // Random distance sets drawn from a small grid so duplicates and ties occur.
    tskit::Rng rng(77);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 2 + rng.uniform_int(0, 8);
        std::vector<double> d(n);
        std::vector<std::string> l(n);
        bool two_classes = false;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = static_cast<double>(rng.uniform_int(0, 5));
            l[i] = rng.uniform_int(0, 2) == 0 ? "A" : (rng.uniform_int(0, 1) == 0 ? "B" : "C");
        }
        for (std::size_t i = 1; i < n; ++i) two_classes |= l[i] != l[0];
        if (!two_classes) l[0] = l[0] == "A" ? "B" : "A";

        const SplitResult a = optimal_split(d, l);
        const SplitResult b = split_oracle(d, l);
        CHECK(a.threshold == b.threshold);
        CHECK(a.gain == doctest::Approx(b.gain).epsilon(1e-12));
        CHECK(a.margin == b.margin);
    }
}

TEST_CASE("all-equal distances fall back to zero gain at the common value") {
    const std::vector<double> d{4, 4, 4, 4};
    const std::vector<std::string> l{"A", "B", "A", "B"};
    const SplitResult r = optimal_split(d, l);
    CHECK(r.gain == 0.0);
    CHECK(r.threshold == 4.0);
    CHECK(r.margin == 0.0);
}

TEST_CASE("gain reaches the label entropy exactly when a threshold separates") {
    const std::vector<std::string> labels{"A", "A", "B", "B"};
    const std::vector<double> separable{0.1, 0.2, 5.0, 6.0};
    CHECK(optimal_split(separable, labels).gain == 1.0);
    const std::vector<double> mixed{0.1, 5.0, 0.2, 6.0};
    CHECK(optimal_split(mixed, labels).gain < 1.0);
}

TEST_CASE("discovery on a planted-bump dataset separates the classes") {
    std::vector<std::size_t> bump_starts;
    const LabeledDataset ds = planted_bump(8, 60, 8, 42, &bump_starts);
    const Shapelet sh = discover_shapelet(ds, DiscoveryParams{6, 10});
    CHECK(sh.gain == 1.0);

    // The winner must come from a bump-class series and overlap its bump.
    REQUIRE(sh.subsequence.source_id.size() > 1);
    const std::size_t row = std::stoul(sh.subsequence.source_id.substr(1));
    REQUIRE(row < 8);
    const std::size_t bump_lo = bump_starts[row];
    const std::size_t bump_hi = bump_lo + 8;
    const std::size_t sh_lo = sh.subsequence.start;
    const std::size_t sh_hi = sh_lo + sh.subsequence.values.size();
    CHECK(sh_lo < bump_hi);
    CHECK(bump_lo < sh_hi);
    CHECK(sh.below_label == "bump");
    CHECK(sh.above_label == "flat");
}

TEST_CASE("two identical series with different labels give a gain-0 shapelet") {
    const std::vector<double> v{0, 1, 2, 3, 2, 1};
    const LabeledDataset ds({make_series(v, "a"), make_series(v, "b")}, {"L1", "L2"});
    const Shapelet sh = discover_shapelet(ds, DiscoveryParams{2, 3});
    CHECK(sh.gain == 0.0);
}

TEST_CASE("discovery matches the exhaustive oracle on small datasets") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        std::vector<TimeSeries> series;
        for (int i = 0; i < 4; ++i) {
            series.push_back(make_series(testutil::gaussian_values(12, seed * 10 + i),
                                         "s" + std::to_string(i)));
        }
        const LabeledDataset ds(std::move(series), {"A", "B", "A", "B"});
        const DiscoveryParams params{2, 5};
        const Shapelet got = discover_shapelet(ds, params);
        const OracleWinner want = discovery_oracle(ds, params);
        CHECK(got.subsequence.source_id == want.source_id);
        CHECK(got.subsequence.start == want.start);
        CHECK(got.subsequence.values.size() == want.length);
        CHECK(got.gain == doctest::Approx(want.split.gain).epsilon(1e-12));
        CHECK(got.threshold == want.split.threshold);
        CHECK(got.margin == want.split.margin);
    }
}

TEST_CASE("discovery is invariant to dataset row order") {
    std::vector<TimeSeries> series;
    for (int i = 0; i < 4; ++i) {
        series.push_back(make_series(testutil::gaussian_values(14, 900 + i),
                                     "s" + std::to_string(i)));
    }
    const LabeledDataset ds(series, {"A", "B", "A", "B"});
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    const LabeledDataset shuffled = ds.subset(perm);

    const DiscoveryParams params{2, 4};
    const Shapelet a = discover_shapelet(ds, params);
    const Shapelet b = discover_shapelet(shuffled, params);
    CHECK(a.subsequence.source_id == b.subsequence.source_id);
    CHECK(a.subsequence.start == b.subsequence.start);
    CHECK(a.subsequence.values == b.subsequence.values);
    CHECK(a.gain == b.gain);
    CHECK(a.threshold == b.threshold);
}

TEST_CASE("coarser stride can only lose candidates") {
    const LabeledDataset ds = planted_bump(4, 40, 6, 7);
    const Shapelet fine = discover_shapelet(ds, DiscoveryParams{4, 8, 1});
    const Shapelet coarse = discover_shapelet(ds, DiscoveryParams{4, 8, 3});
    CHECK(coarse.gain <= fine.gain);
}

TEST_CASE("discovery parameter validation") {
    const LabeledDataset ds({make_series({1, 2, 3, 4}, "a"), make_series({4, 3, 2, 1}, "b")},
                            {"A", "B"});
    CHECK_THROWS_AS(discover_shapelet(ds, DiscoveryParams{1, 3}), InvalidArgumentError);
    CHECK_THROWS_AS(discover_shapelet(ds, DiscoveryParams{3, 2}), InvalidArgumentError);
    CHECK_THROWS_AS(discover_shapelet(ds, DiscoveryParams{2, 5}), TooShortError);
    CHECK_THROWS_AS(discover_shapelet(ds, DiscoveryParams{2, 3, 0}), InvalidArgumentError);

    const LabeledDataset single({make_series({1, 2, 3}, "a"), make_series({3, 2, 1}, "b")},
                                {"A", "A"});
    CHECK_THROWS_AS(discover_shapelet(single, DiscoveryParams{2, 3}), SingleClassError);
}

TEST_CASE("transform with k=1 reproduces the discovery winner's profile") {
    const LabeledDataset ds = planted_bump(4, 40, 6, 11);
    const DiscoveryParams params{4, 8};
    const Shapelet winner = discover_shapelet(ds, params);
    const ShapeletTransformResult r = shapelet_transform(ds, 1, params);

    REQUIRE(r.shapelets.size() == 1);
    CHECK(r.shapelets[0].subsequence.source_id == winner.subsequence.source_id);
    CHECK(r.shapelets[0].subsequence.start == winner.subsequence.start);
    REQUIRE(r.features.cols() == 1);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        REQUIRE(r.features.at(i, 0).has_value());
        CHECK(*r.features.at(i, 0) ==
              subsequence_distance(ds.series(i), winner.subsequence.values));
    }
}

TEST_CASE("transform entries equal direct subsequence distances") {
    const LabeledDataset ds = planted_bump(4, 40, 6, 13);
    const ShapeletTransformResult r = shapelet_transform(ds, 3, DiscoveryParams{4, 8});
    REQUIRE(r.shapelets.size() == 3);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            REQUIRE(r.features.at(i, j).has_value());
            CHECK(*r.features.at(i, j) ==
                  subsequence_distance(ds.series(i), r.shapelets[j].subsequence.values));
            CHECK(*r.features.at(i, j) >= 0.0);
        }
    }
}

TEST_CASE("selected shapelets from one source never overlap") {
    const LabeledDataset ds({make_series({0, 0, 0, 5, 5, 0, 0, 0}, "spiky"),
                             make_series(std::vector<double>(8, 0.0), "flat")},
                            {"has", "not"});
    const ShapeletTransformResult r = shapelet_transform(ds, 2, DiscoveryParams{2, 3});
    REQUIRE(r.shapelets.size() == 2);
    CHECK(r.shapelets[0].gain == 1.0);
    // Every other separating candidate overlaps the winner, so the runner-up
    // is a gain-0 window.
    CHECK(r.shapelets[1].gain == 0.0);
    const auto& a = r.shapelets[0].subsequence;
    const auto& b = r.shapelets[1].subsequence;
    if (a.source_id == b.source_id) {
        const bool disjoint = a.start + a.values.size() <= b.start ||
                              b.start + b.values.size() <= a.start;
        CHECK(disjoint);
    }
}

TEST_CASE("transform raises when fewer than k candidates survive") {
    const LabeledDataset ds({make_series({1, 2, 3, 4}, "a"), make_series({4, 8, 2, 1}, "b")},
                            {"A", "B"});
    const DiscoveryParams whole{4, 4};
    CHECK_NOTHROW(shapelet_transform(ds, 2, whole));
    CHECK_THROWS_AS(shapelet_transform(ds, 3, whole), InsufficientCandidatesError);
    CHECK_THROWS_AS(shapelet_transform(ds, 0, whole), InvalidArgumentError);
}

TEST_CASE("1-NN on transform features classifies the planted data perfectly") {
    const LabeledDataset ds = planted_bump(8, 60, 8, 21);
    const ShapeletTransformResult r = shapelet_transform(ds, 3, DiscoveryParams{6, 10});

    std::size_t correct = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = i;
        for (std::size_t j = 0; j < ds.size(); ++j) {
            if (j == i) continue;
            double ss = 0.0;
            for (std::size_t c = 0; c < 3; ++c) {
                const double d = *r.features.at(i, c) - *r.features.at(j, c);
                ss += d * d;
            }
            if (ss < best) {
                best = ss;
                arg = j;
            }
        }
        if (ds.label(arg) == ds.label(i)) ++correct;
    }
    CHECK(correct == ds.size());
}

TEST_CASE("threshold lies strictly between the two sides of the split") {
    const LabeledDataset ds = planted_bump(6, 50, 7, 33);
    const Shapelet sh = discover_shapelet(ds, DiscoveryParams{5, 9});
    double below_max = -std::numeric_limits<double>::infinity();
    double above_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double d = subsequence_distance(ds.series(i), sh.subsequence.values);
        if (d <= sh.threshold) {
            below_max = std::max(below_max, d);
        } else {
            above_min = std::min(above_min, d);
        }
    }
    CHECK(below_max < sh.threshold);
    CHECK(sh.threshold < above_min);
    CHECK(sh.margin == doctest::Approx(above_min - below_max).epsilon(1e-12));
}

TEST_CASE("normalized windows compare shapes rather than raw values") {
    // The same shape scaled and shifted matches exactly under normalization.
    const std::vector<double> shape{0, 1, 3, 1, 0};
    std::vector<double> host(20, 0.0);
    tskit::Rng rng(5);
    for (double& v : host) v = rng.normal();
    for (std::size_t i = 0; i < shape.size(); ++i) host[7 + i] = 5.0 * shape[i] + 3.0;

    const LabeledDataset ds({make_series(host, "host"),
                             make_series(testutil::gaussian_values(20, 6), "other")},
                            {"A", "B"});
    DiscoveryParams params{5, 5};
    params.normalize_windows = true;
    const ShapeletTransformResult r = shapelet_transform(ds, 1, params);

    // Entries must equal a from-scratch normalized scan.
    const std::vector<double>& sub = r.shapelets[0].subsequence.values;
    const std::vector<double> zsub = znorm_oracle(sub);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& x = ds.series(i).values();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + sub.size() <= x.size(); ++k) {
            const std::vector<double> window(x.begin() + k, x.begin() + k + sub.size());
            const std::vector<double> zwin = znorm_oracle(window);
            double ss = 0.0;
            for (std::size_t t = 0; t < sub.size(); ++t) {
                const double d = zwin[t] - zsub[t];
                ss += d * d;
            }
            best = std::min(best, ss);
        }
        CHECK(*r.features.at(i, 0) == doctest::Approx(std::sqrt(best)).epsilon(1e-12));
    }

    // A positively scaled and shifted copy has the same normalized shape.
    std::vector<double> affine(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) affine[i] = 0.5 * shape[i] - 4.0;
    const std::vector<double> za = znorm_oracle(affine);
    const std::vector<double> zs = znorm_oracle(shape);
    for (std::size_t i = 0; i < shape.size(); ++i) {
        CHECK(za[i] == doctest::Approx(zs[i]).epsilon(1e-12));
    }
}

} // TEST_SUITE
