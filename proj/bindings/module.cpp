#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tskit/dictionary.hpp"
#include "tskit/distances.hpp"
#include "tskit/errors.hpp"
#include "tskit/features.hpp"
#include "tskit/intervals.hpp"
#include "tskit/io.hpp"
#include "tskit/learn.hpp"
#include "tskit/series.hpp"
#include "tskit/shapelets.hpp"
#include "tskit/version.hpp"

namespace py = pybind11;

namespace {

tskit::DistanceSpec make_spec(const std::string& metric, std::optional<std::size_t> window,
                              const std::string& set) {
    tskit::DistanceSpec spec;
    spec.kind = tskit::parse_distance_kind(metric);
    spec.window = window;
    if (spec.kind == tskit::DistanceKind::feature) spec.feature_specs = tskit::feature_set(set);
    return spec;
}

} // namespace

PYBIND11_MODULE(_tskit, m) {
    m.doc() = "feature-based time-series characterization toolkit";
    m.attr("__version__") = tskit::kVersion;

    py::register_exception<tskit::Error>(m, "TskitError");

    py::class_<tskit::TimeSeries>(m, "TimeSeries")
        .def(py::init<std::string, std::vector<double>, double>(), py::arg("id"),
             py::arg("values"), py::arg("dt") = 1.0)
        .def_property_readonly("id", &tskit::TimeSeries::id)
        .def_property_readonly("values", &tskit::TimeSeries::values)
        .def_property_readonly("dt", &tskit::TimeSeries::dt)
        .def("__len__", &tskit::TimeSeries::size);

    py::class_<tskit::LabeledDataset>(m, "LabeledDataset")
        .def(py::init<std::vector<tskit::TimeSeries>, std::vector<std::string>>(),
             py::arg("series"), py::arg("labels"))
        .def("__len__", &tskit::LabeledDataset::size)
        .def("series", &tskit::LabeledDataset::series, py::arg("i"))
        .def("label", &tskit::LabeledDataset::label, py::arg("i"))
        .def_property_readonly("labels", &tskit::LabeledDataset::labels)
        .def_property_readonly("classes", &tskit::LabeledDataset::classes);

    py::class_<tskit::FeatureMatrix>(m, "FeatureMatrix")
        .def_property_readonly("row_ids", &tskit::FeatureMatrix::row_ids)
        .def_property_readonly("col_names", &tskit::FeatureMatrix::col_names)
        .def("rows", &tskit::FeatureMatrix::rows)
        .def("cols", &tskit::FeatureMatrix::cols)
        .def("cell",
             [](const tskit::FeatureMatrix& fm, std::size_t row, std::size_t col) {
                 return fm.at(row, col);
             })
        .def("row_values", [](const tskit::FeatureMatrix& fm, std::size_t i) {
            return fm.row(i).values();
        });

    m.def(
        "load_dataset",
        [](const std::string& path, const std::string& format) {
            return tskit::load_dataset(path, tskit::parse_format(format));
        },
        py::arg("path"), py::arg("format") = "wide-csv");
    m.def(
        "save_dataset",
        [](const tskit::LabeledDataset& ds, const std::string& path, const std::string& format) {
            tskit::save_dataset(ds, path, tskit::parse_format(format));
        },
        py::arg("ds"), py::arg("path"), py::arg("format") = "wide-csv");
    m.def("zscore", &tskit::zscore, py::arg("x"));

    m.def(
        "feature_names",
        [](const std::string& set) {
            std::vector<std::string> names;
            for (const auto& spec : tskit::feature_set(set)) names.push_back(spec.name);
            return names;
        },
        py::arg("set") = "standard-22");
    m.def(
        "extract_features",
        [](const tskit::LabeledDataset& ds, const std::string& set) {
            return tskit::extract_features(ds, tskit::feature_set(set));
        },
        py::arg("ds"), py::arg("set") = "standard-22");

    m.def("autocorrelation", &tskit::autocorrelation, py::arg("x"), py::arg("tau"));
    m.def("spectral_entropy", &tskit::spectral_entropy, py::arg("x"));
    m.def("approximate_entropy", &tskit::approximate_entropy, py::arg("x"), py::arg("m"),
          py::arg("r"));
    m.def(
        "dfa_alpha",
        [](const tskit::TimeSeries& x, int order) {
            return tskit::dfa_alpha(x, order, tskit::default_dfa_scales(x.size(), order)).alpha;
        },
        py::arg("x"), py::arg("order") = 1);
    m.def("complexity_ce", &tskit::complexity_ce, py::arg("x"));

    py::class_<tskit::SmoothingFit>(m, "SmoothingFit")
        .def_readonly("alpha", &tskit::SmoothingFit::alpha)
        .def_readonly("sse_per_point", &tskit::SmoothingFit::sse_per_point)
        .def_readonly("residual_acf1", &tskit::SmoothingFit::residual_acf1);
    m.def(
        "exp_smoothing_fit",
        [](const tskit::TimeSeries& x) {
            const auto grid = tskit::default_alpha_grid();
            return tskit::exp_smoothing_fit(x, grid);
        },
        py::arg("x"));
    m.def("exp_smoothing_forecast", &tskit::exp_smoothing_forecast, py::arg("x"),
          py::arg("alpha"), py::arg("horizon"));

    m.def("euclidean", &tskit::euclidean, py::arg("a"), py::arg("b"));
    m.def("dtw", &tskit::dtw, py::arg("a"), py::arg("b"),
          py::arg("window") = std::optional<std::size_t>());
    m.def("cid", &tskit::cid, py::arg("a"), py::arg("b"));
    m.def(
        "pairwise_distances",
        [](const tskit::LabeledDataset& ds, const std::string& metric,
           std::optional<std::size_t> window, const std::string& set) {
            return tskit::pairwise_matrix(ds, make_spec(metric, window, set));
        },
        py::arg("ds"), py::arg("metric") = "euclid",
        py::arg("window") = std::optional<std::size_t>(), py::arg("set") = "standard-22");

    py::class_<tskit::Subsequence>(m, "Subsequence")
        .def_readonly("values", &tskit::Subsequence::values)
        .def_readonly("source_id", &tskit::Subsequence::source_id)
        .def_readonly("start", &tskit::Subsequence::start);
    py::class_<tskit::Shapelet>(m, "Shapelet")
        .def_readonly("subsequence", &tskit::Shapelet::subsequence)
        .def_readonly("threshold", &tskit::Shapelet::threshold)
        .def_readonly("gain", &tskit::Shapelet::gain)
        .def_readonly("margin", &tskit::Shapelet::margin)
        .def_readonly("below_label", &tskit::Shapelet::below_label)
        .def_readonly("above_label", &tskit::Shapelet::above_label);
    m.def("subsequence_distance", [](const tskit::TimeSeries& x, const std::vector<double>& sub) {
        return tskit::subsequence_distance(x, sub);
    });
    m.def(
        "discover_shapelet",
        [](const tskit::LabeledDataset& ds, std::size_t l_min, std::size_t l_max,
           std::size_t stride, bool normalize) {
            return tskit::discover_shapelet(ds, {l_min, l_max, stride, normalize});
        },
        py::arg("ds"), py::arg("l_min"), py::arg("l_max"), py::arg("stride") = 1,
        py::arg("normalize") = false);
    py::class_<tskit::ShapeletTransformResult>(m, "ShapeletTransformResult")
        .def_readonly("shapelets", &tskit::ShapeletTransformResult::shapelets)
        .def_readonly("features", &tskit::ShapeletTransformResult::features);
    m.def(
        "shapelet_transform",
        [](const tskit::LabeledDataset& ds, std::size_t k, std::size_t l_min, std::size_t l_max,
           std::size_t stride, bool normalize) {
            return tskit::shapelet_transform(ds, k, {l_min, l_max, stride, normalize});
        },
        py::arg("ds"), py::arg("k"), py::arg("l_min"), py::arg("l_max"), py::arg("stride") = 1,
        py::arg("normalize") = false);

    py::class_<tskit::IntervalForest>(m, "IntervalForest")
        .def_readonly("seed", &tskit::IntervalForest::seed)
        .def_readonly("series_length", &tskit::IntervalForest::series_length)
        .def_readonly("classes", &tskit::IntervalForest::classes)
        .def("__len__",
             [](const tskit::IntervalForest& f) { return f.trees.size(); });
    m.def("train_forest", &tskit::train_forest, py::arg("ds"), py::arg("n_trees") = 100,
          py::arg("seed") = 0);
    m.def("forest_predict", &tskit::forest_predict, py::arg("forest"), py::arg("x"));
    m.def(
        "temporal_importance",
        [](const tskit::IntervalForest& forest) {
            return tskit::temporal_importance(forest).curve;
        },
        py::arg("forest"));

    py::class_<tskit::PatternHistogram>(m, "PatternHistogram")
        .def_readonly("counts", &tskit::PatternHistogram::counts)
        .def_readonly("total_windows", &tskit::PatternHistogram::total_windows);
    m.def(
        "bag_of_patterns",
        [](const tskit::TimeSeries& x, std::size_t window, std::size_t word_length,
           std::size_t alphabet, bool numerosity_reduction) {
            return tskit::bag_of_patterns(x, {window, word_length, alphabet},
                                          numerosity_reduction);
        },
        py::arg("x"), py::arg("window"), py::arg("word_length") = 4, py::arg("alphabet") = 4,
        py::arg("numerosity_reduction") = true);
    m.def("histogram_distance", &tskit::histogram_distance, py::arg("a"), py::arg("b"));

    m.def(
        "knn_classify",
        [](const tskit::LabeledDataset& train, const tskit::TimeSeries& x,
           const std::string& metric, std::optional<std::size_t> window, std::size_t k,
           const std::string& set) {
            return tskit::knn_classify(train, x, make_spec(metric, window, set), k);
        },
        py::arg("train"), py::arg("x"), py::arg("metric") = "euclid",
        py::arg("window") = std::optional<std::size_t>(), py::arg("k") = 1,
        py::arg("set") = "standard-22");

    py::class_<tskit::CvResult>(m, "CvResult")
        .def_readonly("accuracy", &tskit::CvResult::accuracy)
        .def_readonly("fold_accuracies", &tskit::CvResult::fold_accuracies)
        .def_readonly("classes", &tskit::CvResult::classes)
        .def_readonly("confusion", &tskit::CvResult::confusion);
    m.def(
        "knn_cross_validate",
        [](const tskit::LabeledDataset& ds, const std::string& metric,
           std::optional<std::size_t> window, std::size_t k, std::size_t folds,
           std::uint64_t seed, const std::string& set) {
            return tskit::cross_validate(ds, tskit::knn_factory(make_spec(metric, window, set), k),
                                         folds, seed);
        },
        py::arg("ds"), py::arg("metric") = "euclid",
        py::arg("window") = std::optional<std::size_t>(), py::arg("k") = 1, py::arg("folds") = 5,
        py::arg("seed") = 0, py::arg("set") = "standard-22");

    py::class_<tskit::FeatureScore>(m, "FeatureScore")
        .def_readonly("name", &tskit::FeatureScore::name)
        .def_readonly("score", &tskit::FeatureScore::score)
        .def_readonly("coverage", &tskit::FeatureScore::coverage);
    m.def("rank_features", &tskit::rank_features, py::arg("features"), py::arg("labels"));
}
