#include "tskit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tskit/dictionary.hpp"
#include "tskit/distances.hpp"
#include "tskit/errors.hpp"
#include "tskit/features.hpp"
#include "tskit/intervals.hpp"
#include "tskit/io.hpp"
#include "tskit/learn.hpp"
#include "tskit/shapelets.hpp"
#include "tskit/version.hpp"

namespace tskit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json; // object keys serialize sorted, so manifests are stable

struct CommonOpts {
    std::string in;
    std::string format = "wide-csv";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--in", opts.in, "input dataset CSV")->required();
    cmd->add_option("--format", opts.format, "input format")
        ->check(CLI::IsMember({"wide-csv", "long-csv"}));
    cmd->add_option("--out", opts.out, "output directory")->required();
}

LabeledDataset load(const CommonOpts& opts) {
    return load_dataset(opts.in, parse_format(opts.format));
}

fs::path prepare_out(const CommonOpts& opts) {
    const fs::path dir(opts.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IOError("cannot create output directory '" + opts.out + "': " + ec.message());
    return dir;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out.good()) throw IOError("failed writing '" + path.string() + "'");
}

// The manifest records the resolved run. The output directory and thread
// count stay out of it: they may vary without changing any produced bytes.
void write_manifest(const fs::path& out_dir, json manifest) {
    manifest["version"] = kVersion;
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

json specs_to_json(const std::vector<FeatureSpec>& specs) {
    json arr = json::array();
    for (const auto& spec : specs) {
        json item;
        item["name"] = spec.name;
        item["op"] = spec.op;
        item["params"] = spec.params;
        arr.push_back(std::move(item));
    }
    return arr;
}

std::vector<FeatureSpec> load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
        if (!doc.is_array()) throw InvalidArgumentError("spec file must be a JSON array");
        std::vector<FeatureSpec> specs;
        for (const auto& item : doc) {
            FeatureSpec spec;
            spec.name = item.at("name").get<std::string>();
            spec.op = item.at("op").get<std::string>();
            if (item.contains("params")) {
                for (const auto& [key, value] : item.at("params").items()) {
                    spec.params[key] = value.get<double>();
                }
            }
            specs.push_back(std::move(spec));
        }
        if (specs.empty()) throw InvalidArgumentError("spec file lists no features");
        return specs;
    } catch (const json::exception& e) {
        throw InvalidArgumentError("spec file '" + path + "': " + e.what());
    }
}

struct FeatureSetOpts {
    std::string set = "standard-22";
    std::string spec_file;
};

void add_feature_set(CLI::App* cmd, FeatureSetOpts& opts) {
    auto* set = cmd->add_option("--set", opts.set, "named feature set");
    auto* file = cmd->add_option("--spec-file", opts.spec_file, "JSON feature spec list");
    set->excludes(file);
}

std::vector<FeatureSpec> resolve_features(const FeatureSetOpts& opts) {
    if (!opts.spec_file.empty()) return load_spec_file(opts.spec_file);
    return feature_set(opts.set);
}

json feature_config_json(const FeatureSetOpts& opts, const std::vector<FeatureSpec>& resolved) {
    json cfg;
    if (opts.spec_file.empty()) cfg["set"] = opts.set;
    cfg["specs"] = specs_to_json(resolved);
    return cfg;
}

struct MetricOpts {
    std::string metric = "euclid";
    long long window = -1; // < 0 = unconstrained
    FeatureSetOpts features;
};

void add_metric(CLI::App* cmd, MetricOpts& opts) {
    cmd->add_option("--metric", opts.metric, "distance kind")
        ->check(CLI::IsMember({"euclid", "dtw", "cid", "feature"}));
    cmd->add_option("--window", opts.window, "dtw band half-width");
    add_feature_set(cmd, opts.features);
}

DistanceSpec resolve_metric(const MetricOpts& opts) {
    DistanceSpec spec;
    spec.kind = parse_distance_kind(opts.metric);
    if (opts.window >= 0) {
        if (spec.kind != DistanceKind::dtw) {
            throw InvalidArgumentError("--window applies to the dtw metric only");
        }
        spec.window = static_cast<std::size_t>(opts.window);
    }
    if (spec.kind == DistanceKind::feature) spec.feature_specs = resolve_features(opts.features);
    return spec;
}

json metric_config_json(const MetricOpts& opts, const DistanceSpec& spec) {
    json cfg;
    cfg["metric"] = opts.metric;
    if (spec.window) cfg["window"] = *spec.window;
    if (spec.kind == DistanceKind::feature) {
        cfg["features"] = feature_config_json(opts.features, spec.feature_specs);
    }
    return cfg;
}

std::size_t min_series_length(const LabeledDataset& ds) {
    std::size_t min_len = std::numeric_limits<std::size_t>::max();
    for (const auto& s : ds.all_series()) min_len = std::min(min_len, s.size());
    return min_len;
}

std::string sanitize_filename(const std::string& id) {
    std::string out = id;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) c = '_';
    }
    return out;
}

// ---------------------------------------------------------------------------
// featurize
// ---------------------------------------------------------------------------

struct FeaturizeOpts {
    CommonOpts common;
    FeatureSetOpts features;
};

void run_featurize(const FeaturizeOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    const std::vector<FeatureSpec> specs = resolve_features(opts.features);
    const fs::path out = prepare_out(opts.common);

    std::vector<ExtractionIssue> issues;
    const FeatureMatrix fm = extract_features(ds, specs, &issues);
    save_feature_matrix(fm, out / "features.csv");

    if (!issues.empty()) {
        json arr = json::array();
        for (const auto& issue : issues) {
            json item;
            item["id"] = fm.row_ids()[issue.row];
            item["feature"] = fm.col_names()[issue.col];
            item["reason"] = issue.reason;
            arr.push_back(std::move(item));
        }
        write_text(out / "issues.json", arr.dump(2) + "\n");
    }

    json manifest;
    manifest["command"] = "featurize";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["features"] = feature_config_json(opts.features, specs);
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// distances
// ---------------------------------------------------------------------------

struct DistancesOpts {
    CommonOpts common;
    MetricOpts metric;
};

void run_distances(const DistancesOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    const DistanceSpec spec = resolve_metric(opts.metric);
    const fs::path out = prepare_out(opts.common);

    const std::vector<std::vector<double>> matrix = pairwise_matrix(ds, spec);
    std::vector<std::string> ids;
    ids.reserve(ds.size());
    for (const auto& s : ds.all_series()) ids.push_back(s.id());
    save_distance_matrix(ids, matrix, out / "distances.csv");

    json manifest;
    manifest["command"] = "distances";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["distance"] = metric_config_json(opts.metric, spec);
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// shapelet
// ---------------------------------------------------------------------------

struct ShapeletOpts {
    CommonOpts common;
    std::size_t k = 3;
    std::size_t l_min = 0; // 0 = derive from the shortest series
    std::size_t l_max = 0;
    std::size_t stride = 1;
    bool normalize = false;
};

void run_shapelet(const ShapeletOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    DiscoveryParams params{opts.l_min, opts.l_max, opts.stride, opts.normalize};
    if (params.l_min == 0) params.l_min = std::max<std::size_t>(2, min_series_length(ds) / 8);
    if (params.l_max == 0) params.l_max = std::max(params.l_min, min_series_length(ds) / 4);
    const fs::path out = prepare_out(opts.common);

    const ShapeletTransformResult result = shapelet_transform(ds, opts.k, params);

    json arr = json::array();
    for (const auto& sh : result.shapelets) {
        json item;
        item["values"] = sh.subsequence.values;
        item["source_id"] = sh.subsequence.source_id;
        item["start"] = sh.subsequence.start;
        item["length"] = sh.subsequence.values.size();
        item["gain"] = sh.gain;
        item["threshold"] = sh.threshold;
        item["margin"] = sh.margin;
        item["below_label"] = sh.below_label;
        item["above_label"] = sh.above_label;
        arr.push_back(std::move(item));
    }
    json report;
    report["shapelets"] = std::move(arr);
    write_text(out / "shapelets.json", report.dump(2) + "\n");
    save_feature_matrix(result.features, out / "transform.csv");

    json manifest;
    manifest["command"] = "shapelet";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["k"] = opts.k;
    manifest["l_min"] = params.l_min;
    manifest["l_max"] = params.l_max;
    manifest["stride"] = params.stride;
    manifest["normalize"] = params.normalize_windows;
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// tsf
// ---------------------------------------------------------------------------

struct TsfOpts {
    CommonOpts common;
    std::size_t trees = 100;
    std::uint64_t seed = 0;
    std::string test;
};

void run_tsf(const TsfOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    const fs::path out = prepare_out(opts.common);

    const IntervalForest forest = train_forest(ds, opts.trees, opts.seed);
    const ImportanceCurve importance = temporal_importance(forest);

    std::string csv = "t,mean,std,slope\n";
    for (std::size_t t = 0; t < importance.series_length; ++t) {
        csv += std::to_string(t + 1);
        for (std::size_t kind = 0; kind < 3; ++kind) {
            csv += ',';
            csv += format_double(importance.curve[kind][t]);
        }
        csv += '\n';
    }
    write_text(out / "importance.csv", csv);

    json summary;
    summary["classes"] = forest.classes;
    summary["n_trees"] = opts.trees;
    summary["seed"] = opts.seed;
    summary["series_length"] = forest.series_length;
    summary["train_size"] = ds.size();

    if (!opts.test.empty()) {
        const LabeledDataset test = load_dataset(opts.test, parse_format(opts.common.format));
        std::string pred = "id,actual,predicted\n";
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test.size(); ++i) {
            const std::string predicted = forest_predict(forest, test.series(i));
            pred += test.series(i).id() + ',' + test.label(i) + ',' + predicted + '\n';
            if (predicted == test.label(i)) ++correct;
        }
        write_text(out / "predictions.csv", pred);
        summary["test_accuracy"] =
            static_cast<double>(correct) / static_cast<double>(test.size());
    }
    write_text(out / "summary.json", summary.dump(2) + "\n");

    json manifest;
    manifest["command"] = "tsf";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["n_trees"] = opts.trees;
    manifest["seed"] = opts.seed;
    if (!opts.test.empty()) manifest["test"] = opts.test;
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// bop
// ---------------------------------------------------------------------------

struct BopOpts {
    CommonOpts common;
    std::size_t window = 0;
    std::size_t word_length = 4;
    std::size_t alphabet = 4;
    bool no_reduction = false;
};

void run_bop(const BopOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    const SymbolicParams params{opts.window, opts.word_length, opts.alphabet};
    const fs::path out = prepare_out(opts.common);

    std::map<std::string, std::string> used; // sanitized name -> original id
    std::vector<PatternHistogram> histograms;
    histograms.reserve(ds.size());
    for (const auto& s : ds.all_series()) {
        histograms.push_back(bag_of_patterns(s, params, !opts.no_reduction));
        const std::string safe = sanitize_filename(s.id());
        const auto [it, inserted] = used.emplace(safe, s.id());
        if (!inserted) {
            throw InvalidArgumentError("series ids '" + it->second + "' and '" + s.id() +
                                       "' collide after filename sanitization");
        }
        std::string csv = "word,count\n";
        for (const auto& [word, count] : histograms.back().counts) {
            csv += word + ',' + std::to_string(count) + '\n';
        }
        write_text(out / ("histogram_" + safe + ".csv"), csv);
    }

    std::vector<std::vector<double>> matrix(ds.size(), std::vector<double>(ds.size(), 0.0));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = i + 1; j < ds.size(); ++j) {
            matrix[i][j] = matrix[j][i] = histogram_distance(histograms[i], histograms[j]);
        }
    }
    std::vector<std::string> ids;
    ids.reserve(ds.size());
    for (const auto& s : ds.all_series()) ids.push_back(s.id());
    save_distance_matrix(ids, matrix, out / "distances.csv");

    json manifest;
    manifest["command"] = "bop";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["window"] = opts.window;
    manifest["word_length"] = opts.word_length;
    manifest["alphabet"] = opts.alphabet;
    manifest["numerosity_reduction"] = !opts.no_reduction;
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyOpts {
    CommonOpts common;
    std::string model = "knn";
    MetricOpts metric;
    std::size_t k = 1;
    std::size_t trees = 100;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    std::string test;
};

void run_classify(const ClassifyOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    const fs::path out = prepare_out(opts.common);

    json manifest;
    manifest["command"] = "classify";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["model"] = opts.model;
    manifest["folds"] = opts.folds;
    manifest["seed"] = opts.seed;
    if (!opts.test.empty()) manifest["test"] = opts.test;

    json report;
    report["model"] = opts.model;
    report["folds"] = opts.folds;
    report["seed"] = opts.seed;

    ClassifierFactory factory;
    EnsembleConfig ensemble_config;
    if (opts.model == "knn") {
        const DistanceSpec spec = resolve_metric(opts.metric);
        factory = knn_factory(spec, opts.k);
        manifest["k"] = opts.k;
        manifest["distance"] = metric_config_json(opts.metric, spec);
        report["k"] = opts.k;
        report["distance"] = opts.metric.metric;
    } else if (opts.model == "forest") {
        factory = forest_factory(opts.trees, opts.seed);
        manifest["n_trees"] = opts.trees;
        report["n_trees"] = opts.trees;
    } else {
        ensemble_config.knn_k = opts.k;
        ensemble_config.n_trees = opts.trees;
        if (opts.metric.window >= 0) {
            ensemble_config.dtw_window = static_cast<std::size_t>(opts.metric.window);
        }
        factory = ensemble_factory(ensemble_config, opts.seed);
        manifest["k"] = opts.k;
        manifest["n_trees"] = opts.trees;
        report["k"] = opts.k;
        report["n_trees"] = opts.trees;
    }

    const CvResult cv = cross_validate(ds, factory, opts.folds, opts.seed);
    json cv_json;
    cv_json["accuracy"] = cv.accuracy;
    cv_json["fold_accuracies"] = cv.fold_accuracies;
    cv_json["classes"] = cv.classes;
    cv_json["confusion"] = cv.confusion;
    report["cv"] = std::move(cv_json);

    std::unique_ptr<Classifier> model;
    if (opts.model == "ensemble") {
        // Fit once via fit_ensemble so the member weights can be reported.
        auto members = std::make_shared<std::vector<EnsembleMember>>(
            fit_ensemble(ds, ensemble_config, opts.seed));
        json member_json = json::array();
        for (const auto& member : *members) {
            json item;
            item["name"] = member.name;
            item["weight"] = member.weight;
            member_json.push_back(std::move(item));
        }
        report["members"] = std::move(member_json);
        if (!opts.test.empty()) {
            struct Fitted final : Classifier {
                std::shared_ptr<std::vector<EnsembleMember>> members;
                void fit(const LabeledDataset&) override {}
                std::string predict(const TimeSeries& x) const override {
                    return ensemble_predict(*members, x).label;
                }
            };
            auto fitted = std::make_unique<Fitted>();
            fitted->members = members;
            model = std::move(fitted);
        }
    } else if (!opts.test.empty()) {
        model = factory();
        model->fit(ds);
    }

    if (!opts.test.empty()) {
        const LabeledDataset test = load_dataset(opts.test, parse_format(opts.common.format));
        std::string pred = "id,actual,predicted\n";
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test.size(); ++i) {
            const std::string predicted = model->predict(test.series(i));
            pred += test.series(i).id() + ',' + test.label(i) + ',' + predicted + '\n';
            if (predicted == test.label(i)) ++correct;
        }
        write_text(out / "predictions.csv", pred);
        json test_json;
        test_json["accuracy"] = static_cast<double>(correct) / static_cast<double>(test.size());
        test_json["size"] = test.size();
        report["test"] = std::move(test_json);
    }

    write_text(out / "report.json", report.dump(2) + "\n");
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

struct RankOpts {
    CommonOpts common;
    FeatureSetOpts features;
    std::string feature_file; // precomputed matrix instead of extraction
    std::size_t select = 0;   // 0 = ranking only
    std::size_t folds = 5;
    std::uint64_t seed = 0;
};

void run_rank(const RankOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    const fs::path out = prepare_out(opts.common);

    json manifest;
    manifest["command"] = "rank";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["select"] = opts.select;
    if (opts.select > 0) {
        manifest["folds"] = opts.folds;
        manifest["seed"] = opts.seed;
    }

    std::optional<FeatureMatrix> fm;
    std::vector<std::string> labels;
    if (!opts.feature_file.empty()) {
        fm.emplace(load_feature_matrix(opts.feature_file));
        std::map<std::string, std::string> label_of;
        for (std::size_t i = 0; i < ds.size(); ++i) label_of[ds.series(i).id()] = ds.label(i);
        for (const auto& id : fm->row_ids()) {
            const auto it = label_of.find(id);
            if (it == label_of.end()) {
                throw NameMismatchError("feature matrix row '" + id +
                                        "' has no matching series in the dataset");
            }
            labels.push_back(it->second);
        }
        manifest["features_file"] = opts.feature_file;
    } else {
        const std::vector<FeatureSpec> specs = resolve_features(opts.features);
        fm.emplace(extract_features(ds, specs));
        labels = ds.labels();
        manifest["features"] = feature_config_json(opts.features, specs);
    }

    const std::vector<FeatureScore> ranking = rank_features(*fm, labels);
    json rank_json = json::array();
    for (const auto& fs_item : ranking) {
        json item;
        item["name"] = fs_item.name;
        item["score"] = fs_item.score;
        item["coverage"] = fs_item.coverage;
        rank_json.push_back(std::move(item));
    }
    json report;
    report["ranking"] = std::move(rank_json);
    if (opts.select > 0) {
        report["selected"] = greedy_select(*fm, labels, opts.select, opts.folds, opts.seed);
    }
    write_text(out / "ranking.json", report.dump(2) + "\n");
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------
// forecast
// ---------------------------------------------------------------------------

struct ForecastOpts {
    CommonOpts common;
    std::size_t horizon = 1;
    double alpha = 0.0;      // 0 = fit on the grid
    std::string grid = "0.01:1:0.01";
};

std::vector<double> parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw InvalidArgumentError("grid must be start:stop:step, got '" + text + "'");
    }
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    try {
        start = std::stod(text.substr(0, first));
        stop = std::stod(text.substr(first + 1, second - first - 1));
        step = std::stod(text.substr(second + 1));
    } catch (const std::exception&) {
        throw InvalidArgumentError("grid must be start:stop:step, got '" + text + "'");
    }
    if (!(start > 0.0) || !(stop <= 1.0) || !(start <= stop) || !(step > 0.0)) {
        throw InvalidArgumentError("grid must satisfy 0 < start <= stop <= 1 with step > 0");
    }
    std::vector<double> grid;
    for (double v = start; v <= stop + step * 1e-9; v += step) grid.push_back(std::min(v, stop));
    return grid;
}

void run_forecast(const ForecastOpts& opts) {
    const LabeledDataset ds = load(opts.common);
    if (opts.alpha != 0.0 && (opts.alpha <= 0.0 || opts.alpha > 1.0)) {
        throw InvalidArgumentError("--alpha must be in (0, 1]");
    }
    const std::vector<double> grid =
        opts.alpha != 0.0 ? std::vector<double>{opts.alpha} : parse_grid(opts.grid);
    const fs::path out = prepare_out(opts.common);

    std::string forecast_csv = "id,step,value\n";
    std::string fit_csv = "id,alpha,sse_per_point,residual_acf1\n";
    for (const auto& s : ds.all_series()) {
        const SmoothingFit fit = exp_smoothing_fit(s, grid);
        const std::vector<double> predicted = exp_smoothing_forecast(s, fit.alpha, opts.horizon);
        for (std::size_t h = 0; h < predicted.size(); ++h) {
            forecast_csv += s.id() + ',' + std::to_string(h + 1) + ',' +
                            format_double(predicted[h]) + '\n';
        }
        fit_csv += s.id() + ',' + format_double(fit.alpha) + ',' +
                   format_double(fit.sse_per_point) + ',' +
                   (fit.residual_acf1 ? format_double(*fit.residual_acf1) : "") + '\n';
    }
    write_text(out / "forecast.csv", forecast_csv);
    write_text(out / "fit.csv", fit_csv);

    json manifest;
    manifest["command"] = "forecast";
    manifest["in"] = opts.common.in;
    manifest["format"] = opts.common.format;
    manifest["horizon"] = opts.horizon;
    if (opts.alpha != 0.0) {
        manifest["alpha"] = opts.alpha;
    } else {
        manifest["grid"] = opts.grid;
    }
    write_manifest(out, std::move(manifest));
}

// ---------------------------------------------------------------------------

int dispatch(const std::vector<std::string>& args) {
    static const std::set<std::string> commands = {"featurize", "distances", "shapelet", "tsf",
                                                   "bop",       "classify",  "rank",     "forecast"};
    if (args.empty()) {
        throw UnknownCommandError(
            "no command given; expected one of "
            "featurize|distances|shapelet|tsf|bop|classify|rank|forecast");
    }
    if (!args[0].empty() && args[0][0] != '-' && commands.find(args[0]) == commands.end()) {
        throw UnknownCommandError("unknown command '" + args[0] + "'");
    }

    CLI::App app{"feature-based time-series characterization toolkit", "tskit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    FeaturizeOpts featurize_opts;
    auto* featurize = app.add_subcommand("featurize", "extract a feature matrix");
    add_common(featurize, featurize_opts.common);
    add_feature_set(featurize, featurize_opts.features);
    featurize->callback([&] { run_featurize(featurize_opts); });

    DistancesOpts distances_opts;
    auto* distances = app.add_subcommand("distances", "pairwise distance matrix");
    add_common(distances, distances_opts.common);
    add_metric(distances, distances_opts.metric);
    distances->callback([&] { run_distances(distances_opts); });

    ShapeletOpts shapelet_opts;
    auto* shapelet = app.add_subcommand("shapelet", "discover shapelets and transform");
    add_common(shapelet, shapelet_opts.common);
    shapelet->add_option("--k", shapelet_opts.k, "shapelets to keep")
        ->check(CLI::PositiveNumber);
    shapelet->add_option("--lmin", shapelet_opts.l_min, "shortest candidate length (0 = auto)");
    shapelet->add_option("--lmax", shapelet_opts.l_max, "longest candidate length (0 = auto)");
    shapelet->add_option("--stride", shapelet_opts.stride, "candidate start step")
        ->check(CLI::PositiveNumber);
    shapelet->add_flag("--normalize", shapelet_opts.normalize, "z-normalize windows");
    shapelet->callback([&] { run_shapelet(shapelet_opts); });

    TsfOpts tsf_opts;
    auto* tsf = app.add_subcommand("tsf", "interval forest training and importance");
    add_common(tsf, tsf_opts.common);
    tsf->add_option("--trees", tsf_opts.trees, "forest size")->check(CLI::PositiveNumber);
    tsf->add_option("--seed", tsf_opts.seed, "RNG seed");
    tsf->add_option("--test", tsf_opts.test, "test dataset CSV");
    tsf->callback([&] { run_tsf(tsf_opts); });

    BopOpts bop_opts;
    auto* bop = app.add_subcommand("bop", "bag-of-patterns histograms");
    add_common(bop, bop_opts.common);
    bop->add_option("--window", bop_opts.window, "sliding window length")->required();
    bop->add_option("--word-length", bop_opts.word_length, "PAA segments per window");
    bop->add_option("--alphabet", bop_opts.alphabet, "alphabet size");
    bop->add_flag("--no-reduction", bop_opts.no_reduction, "count every window");
    bop->callback([&] { run_bop(bop_opts); });

    ClassifyOpts classify_opts;
    auto* classify = app.add_subcommand("classify", "train and evaluate a classifier");
    add_common(classify, classify_opts.common);
    classify->add_option("--model", classify_opts.model, "classifier kind")
        ->check(CLI::IsMember({"knn", "forest", "ensemble"}));
    add_metric(classify, classify_opts.metric);
    classify->add_option("--k", classify_opts.k, "nearest neighbours")
        ->check(CLI::PositiveNumber);
    classify->add_option("--trees", classify_opts.trees, "forest size")
        ->check(CLI::PositiveNumber);
    classify->add_option("--folds", classify_opts.folds, "cross-validation folds");
    classify->add_option("--seed", classify_opts.seed, "RNG seed");
    classify->add_option("--test", classify_opts.test, "test dataset CSV");
    classify->callback([&] { run_classify(classify_opts); });

    RankOpts rank_opts;
    auto* rank = app.add_subcommand("rank", "feature ranking and selection");
    add_common(rank, rank_opts.common);
    add_feature_set(rank, rank_opts.features);
    rank->add_option("--features", rank_opts.feature_file, "precomputed feature matrix CSV");
    rank->add_option("--select", rank_opts.select, "greedy-select up to this many features");
    rank->add_option("--folds", rank_opts.folds, "selection folds");
    rank->add_option("--seed", rank_opts.seed, "RNG seed");
    rank->callback([&] { run_rank(rank_opts); });

    ForecastOpts forecast_opts;
    auto* forecast = app.add_subcommand("forecast", "exponential smoothing forecasts");
    add_common(forecast, forecast_opts.common);
    forecast->add_option("--horizon", forecast_opts.horizon, "steps ahead")
        ->required()
        ->check(CLI::PositiveNumber);
    forecast->add_option("--alpha", forecast_opts.alpha, "fixed smoothing parameter");
    forecast->add_option("--grid", forecast_opts.grid, "alpha grid start:stop:step");
    forecast->callback([&] { run_forecast(forecast_opts); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("tskit");
    for (const auto& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        std::cout << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        throw InvalidArgumentError(e.what());
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.message() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
}

} // namespace tskit::cli
