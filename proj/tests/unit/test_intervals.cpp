#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "tskit/errors.hpp"
#include "tskit/intervals.hpp"
#include "tskit/rng.hpp"

using namespace tskit;
using testutil::make_series;

namespace {

// Textbook mean / unbiased std / least-squares slope over 1-based positions.
IntervalStats stats_oracle(const std::vector<double>& x, std::size_t t1, std::size_t t2) {
    const std::size_t len = t2 - t1 + 1;
    double mean = 0.0;
    for (std::size_t t = t1; t <= t2; ++t) mean += x[t - 1];
    mean /= static_cast<double>(len);

    double ss = 0.0;
    for (std::size_t t = t1; t <= t2; ++t) {
        const double d = x[t - 1] - mean;
        ss += d * d;
    }
    const double stdev = std::sqrt(ss / static_cast<double>(len - 1));

    const double p_mean = (static_cast<double>(t1) + static_cast<double>(t2)) / 2.0;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = t1; t <= t2; ++t) {
        const double dp = static_cast<double>(t) - p_mean;
        num += dp * (x[t - 1] - mean);
        den += dp * dp;
    }
    return IntervalStats{mean, stdev, num / den};
}

// Two well-separated classes: noise around 0 versus noise around a high mean.
LabeledDataset separable_dataset(std::size_t per_class, std::size_t n, std::uint64_t seed) {
    tskit::Rng rng(seed);
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const double base = i < per_class ? 0.0 : 5.0;
        std::vector<double> v(n);
        for (double& x : v) x = base + 0.5 * rng.normal();
        series.push_back(make_series(std::move(v), "s" + std::to_string(i)));
        labels.push_back(i < per_class ? "low" : "high");
    }
    return LabeledDataset(std::move(series), std::move(labels));
}

bool same_node(const TreeNode& a, const TreeNode& b) {
    return a.t1 == b.t1 && a.t2 == b.t2 && a.kind == b.kind && a.threshold == b.threshold &&
           a.gain == b.gain && a.left == b.left && a.right == b.right && a.label == b.label;
}

} // namespace

TEST_SUITE("intervals") {

TEST_CASE("interval stats of a pure linear trend") {
    const TimeSeries x = make_series({2, 4, 6, 8, 10});
    const IntervalStats full = interval_features(x, 1, 5);
    CHECK(full.mean == 6.0);
    CHECK(full.slope == 2.0);
    CHECK(full.stdev == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));

    const IntervalStats inner = interval_features(x, 2, 4);
    CHECK(inner.mean == 6.0);
    CHECK(inner.slope == 2.0);
    CHECK(inner.stdev == 2.0);
}

TEST_CASE("constant interval has zero spread and slope") {
    const TimeSeries x = make_series({3.5, 3.5, 3.5, 3.5});
    const IntervalStats s = interval_features(x, 1, 4);
    CHECK(s.mean == 3.5);
    CHECK(s.stdev == 0.0);
    CHECK(s.slope == 0.0);
}

TEST_CASE("interval stats match the direct formulas on random data") {
    tskit::Rng rng(17);
    for (int round = 0; round < 30; ++round) {
        const std::vector<double> v = testutil::gaussian_values(25, 600 + round);
        const TimeSeries x = make_series(v);
        const std::size_t t1 = 1 + rng.uniform_int(0, 22);
        const std::size_t t2 = t1 + 1 + rng.uniform_int(0, 24 - t1);
        const IntervalStats got = interval_features(x, t1, t2);
        const IntervalStats want = stats_oracle(v, t1, t2);
        CHECK(got.mean == doctest::Approx(want.mean).epsilon(1e-10));
        CHECK(got.stdev == doctest::Approx(want.stdev).epsilon(1e-10));
        CHECK(got.slope == doctest::Approx(want.slope).epsilon(1e-10));
    }
}

TEST_CASE("interval bounds are validated") {
    const TimeSeries x = make_series({1, 2, 3, 4, 5});
    CHECK_THROWS_AS(interval_features(x, 0, 3), BadIntervalError);
    CHECK_THROWS_AS(interval_features(x, 3, 3), BadIntervalError);
    CHECK_THROWS_AS(interval_features(x, 4, 3), BadIntervalError);
    CHECK_THROWS_AS(interval_features(x, 2, 6), BadIntervalError);
    CHECK_NOTHROW(interval_features(x, 1, 2));
    CHECK_NOTHROW(interval_features(x, 4, 5));
}

TEST_CASE("adding a constant shifts the mean and nothing else") {
    const std::vector<double> v = testutil::gaussian_values(30, 71);
    std::vector<double> shifted = v;
    for (double& x : shifted) x += 100.0;
    const IntervalStats a = interval_features(make_series(v), 5, 20);
    const IntervalStats b = interval_features(make_series(shifted), 5, 20);
    CHECK(b.mean == doctest::Approx(a.mean + 100.0).epsilon(1e-12));
    CHECK(b.stdev == doctest::Approx(a.stdev).epsilon(1e-10));
    CHECK(b.slope == doctest::Approx(a.slope).epsilon(1e-10));
}

TEST_CASE("training twice with one seed gives bit-identical forests") {
    const LabeledDataset ds = separable_dataset(5, 24, 91);
    const IntervalForest a = train_forest(ds, 8, 4);
    const IntervalForest b = train_forest(ds, 8, 4);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) {
        REQUIRE(a.trees[t].nodes.size() == b.trees[t].nodes.size());
        for (std::size_t i = 0; i < a.trees[t].nodes.size(); ++i) {
            CHECK(same_node(a.trees[t].nodes[i], b.trees[t].nodes[i]));
        }
    }
    const IntervalForest c = train_forest(ds, 8, 5);
    bool any_diff = false;
    for (std::size_t t = 0; t < a.trees.size() && !any_diff; ++t) {
        if (a.trees[t].nodes.size() != c.trees[t].nodes.size()) {
            any_diff = true;
            break;
        }
        for (std::size_t i = 0; i < a.trees[t].nodes.size(); ++i) {
            if (!same_node(a.trees[t].nodes[i], c.trees[t].nodes[i])) {
                any_diff = true;
                break;
            }
        }
    }
    CHECK(any_diff);
}

TEST_CASE("training input validation") {
    const LabeledDataset ds = separable_dataset(3, 10, 2);
    CHECK_THROWS_AS(train_forest(ds, 0, 0), InvalidArgumentError);

    const LabeledDataset single({make_series({1, 2, 3, 4}, "a"), make_series({2, 3, 4, 5}, "b")},
                                {"A", "A"});
    CHECK_THROWS_AS(train_forest(single, 3, 0), SingleClassError);

    const LabeledDataset ragged({make_series({1, 2, 3, 4}, "a"), make_series({2, 3, 4}, "b")},
                                {"A", "B"});
    CHECK_THROWS_AS(train_forest(ragged, 3, 0), LengthMismatchError);

    const LabeledDataset tiny({make_series({1, 2, 3}, "a"), make_series({3, 2, 1}, "b")},
                              {"A", "B"});
    CHECK_THROWS_AS(train_forest(tiny, 3, 0), TooShortError);
}

TEST_CASE("forest metadata records the training setup") {
    const LabeledDataset ds = separable_dataset(4, 16, 10);
    const IntervalForest forest = train_forest(ds, 5, 123);
    CHECK(forest.seed == 123);
    CHECK(forest.series_length == 16);
    CHECK(forest.classes == std::vector<std::string>{"high", "low"});
    CHECK(forest.trees.size() == 5);
}

TEST_CASE("trained trees satisfy the structural invariants") {
    const LabeledDataset ds = separable_dataset(5, 20, 29);
    const IntervalForest forest = train_forest(ds, 10, 7);
    for (const auto& tree : forest.trees) {
        REQUIRE(!tree.nodes.empty());
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const TreeNode& node = tree.nodes[i];
            if (node.left < 0) {
                CHECK(node.right < 0);
                CHECK(!node.label.empty());
            } else {
                CHECK(node.gain > 1e-12);
                CHECK(node.t1 >= 1);
                CHECK(node.t1 < node.t2);
                CHECK(node.t2 <= 20);
                // Children are appended after their parent.
                CHECK(static_cast<std::size_t>(node.left) > i);
                CHECK(static_cast<std::size_t>(node.right) > i);
                CHECK(static_cast<std::size_t>(node.left) < tree.nodes.size());
                CHECK(static_cast<std::size_t>(node.right) < tree.nodes.size());
            }
        }
    }
}

TEST_CASE("separable training data is refit perfectly") {
    const LabeledDataset ds = separable_dataset(10, 30, 55);
    const IntervalForest forest = train_forest(ds, 15, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(forest_predict(forest, ds.series(i)) == ds.label(i));
    }
}

TEST_CASE("a lone leaf predicts its label for any input") {
    IntervalForest forest;
    forest.series_length = 4;
    forest.trees.resize(1);
    TreeNode leaf;
    leaf.label = "onlyclass";
    forest.trees[0].nodes.push_back(leaf);
    CHECK(forest_predict(forest, make_series({9, 9})) == "onlyclass");
    // Leaf-only forests never touch the series, so no importance mass either.
    const ImportanceCurve curve = temporal_importance(forest);
    for (const auto& row : curve.curve) {
        for (double v : row) CHECK(v == 0.0);
    }
}

TEST_CASE("vote ties go to the lexicographically smallest label") {
    IntervalForest forest;
    forest.series_length = 4;
    forest.trees.resize(2);
    TreeNode b;
    b.label = "beta";
    TreeNode a;
    a.label = "alpha";
    forest.trees[0].nodes.push_back(b);
    forest.trees[1].nodes.push_back(a);
    CHECK(forest_predict(forest, make_series({1, 2, 3, 4})) == "alpha");
}

TEST_CASE("prediction rejects series shorter than the trained bounds") {
    const LabeledDataset ds = separable_dataset(5, 20, 3);
    const IntervalForest forest = train_forest(ds, 5, 0);
    CHECK_THROWS_AS(forest_predict(forest, make_series({1.0})), LengthMismatchError);
    CHECK_NOTHROW(forest_predict(forest, ds.series(0)));
}

TEST_CASE("importance sums gain over the covered positions") {
    IntervalForest forest;
    forest.series_length = 6;
    forest.trees.resize(2);

    TreeNode split1;
    split1.t1 = 2;
    split1.t2 = 4;
    split1.kind = IntervalKind::mean;
    split1.gain = 0.5;
    split1.left = 1;
    split1.right = 2;
    TreeNode la;
    la.label = "A";
    TreeNode lb;
    lb.label = "B";
    forest.trees[0].nodes = {split1, la, lb};

    TreeNode split2;
    split2.t1 = 1;
    split2.t2 = 2;
    split2.kind = IntervalKind::slope;
    split2.gain = 0.25;
    split2.left = 1;
    split2.right = 2;
    forest.trees[1].nodes = {split2, la, lb};

    const ImportanceCurve curve = temporal_importance(forest);
    REQUIRE(curve.curve.size() == 3);
    REQUIRE(curve.series_length == 6);
    const std::vector<double> want_mean{0, 0.5, 0.5, 0.5, 0, 0};
    const std::vector<double> want_slope{0.25, 0.25, 0, 0, 0, 0};
    CHECK(curve.curve[static_cast<std::size_t>(IntervalKind::mean)] == want_mean);
    CHECK(curve.curve[static_cast<std::size_t>(IntervalKind::slope)] == want_slope);
    for (double v : curve.curve[static_cast<std::size_t>(IntervalKind::std_dev)]) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("importance totals equal gain times interval length") {
    const LabeledDataset ds = separable_dataset(6, 18, 77);
    const IntervalForest forest = train_forest(ds, 12, 1);
    const ImportanceCurve curve = temporal_importance(forest);

    std::vector<double> want_total(3, 0.0);
    for (const auto& tree : forest.trees) {
        for (const auto& node : tree.nodes) {
            if (node.left < 0) continue;
            want_total[static_cast<std::size_t>(node.kind)] +=
                node.gain * static_cast<double>(node.t2 - node.t1 + 1);
        }
    }
    for (std::size_t k = 0; k < 3; ++k) {
        double total = 0.0;
        for (double v : curve.curve[k]) total += v;
        CHECK(total == doctest::Approx(want_total[k]).epsilon(1e-9));
    }
}

TEST_CASE("two constant levels split on interval means only") {
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    for (int i = 0; i < 6; ++i) {
        const double level = i < 3 ? 0.0 : 5.0;
        series.push_back(make_series(std::vector<double>(12, level), "s" + std::to_string(i)));
        labels.push_back(i < 3 ? "low" : "high");
    }
    const LabeledDataset ds(std::move(series), std::move(labels));
    const IntervalForest forest = train_forest(ds, 10, 0);

    for (const auto& tree : forest.trees) {
        // One mean split separates the levels, so each tree is a stump.
        REQUIRE(tree.nodes.size() == 3);
        CHECK(tree.nodes[0].kind == IntervalKind::mean);
        CHECK(tree.nodes[0].gain == 1.0);
        CHECK(tree.nodes[0].threshold == 2.5);
    }
    const ImportanceCurve curve = temporal_importance(forest);
    for (double v : curve.curve[static_cast<std::size_t>(IntervalKind::std_dev)]) {
        CHECK(v == 0.0);
    }
    for (double v : curve.curve[static_cast<std::size_t>(IntervalKind::slope)]) {
        CHECK(v == 0.0);
    }
    double mean_mass = 0.0;
    for (double v : curve.curve[static_cast<std::size_t>(IntervalKind::mean)]) mean_mass += v;
    CHECK(mean_mass > 0.0);
}

TEST_CASE("a mean shift confined to the second half dominates its importance") {
    tskit::Rng rng(123);
    std::vector<TimeSeries> series;
    std::vector<std::string> labels;
    const std::size_t n = 60;
    for (std::size_t i = 0; i < 20; ++i) {
        std::vector<double> v(n);
        for (double& x : v) x = 0.5 * rng.normal();
        if (i < 10) {
            for (std::size_t t = n / 2; t < n; ++t) v[t] += 3.0;
        }
        series.push_back(make_series(std::move(v), "s" + std::to_string(i)));
        labels.push_back(i < 10 ? "shifted" : "plain");
    }
    const LabeledDataset ds(std::move(series), std::move(labels));
    const IntervalForest forest = train_forest(ds, 30, 3);
    const ImportanceCurve curve = temporal_importance(forest);

    const auto& mean_row = curve.curve[static_cast<std::size_t>(IntervalKind::mean)];
    double first = 0.0;
    double second = 0.0;
    for (std::size_t t = 0; t < n / 2; ++t) first += mean_row[t];
    for (std::size_t t = n / 2; t < n; ++t) second += mean_row[t];
    REQUIRE(first + second > 0.0);
    CHECK(second / (first + second) >= 0.7);
}

TEST_CASE("interval kind names") {
    CHECK(interval_kind_name(IntervalKind::mean) == "mean");
    CHECK(interval_kind_name(IntervalKind::std_dev) == "std");
    CHECK(interval_kind_name(IntervalKind::slope) == "slope");
}

} // TEST_SUITE
