// Command-line front end: generate, associate, plot, evaluate, reproduce.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sensorassoc/dataset_io.hpp"
#include "sensorassoc/errors.hpp"
#include "sensorassoc/experiment.hpp"
#include "sensorassoc/model_io.hpp"
#include "sensorassoc/preprocess.hpp"
#include "sensorassoc/reproduce.hpp"
#include "sensorassoc/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace sensorassoc;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kDataError = 3, kInternalError = 4 };

struct GenerateArgs {
    std::string scenario_file;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> nk;
    std::string out = "datasets";
};

struct AssociateArgs {
    std::string dataset;
    std::string algorithm = "kmnspp";
    std::string out = "associated";
    std::uint64_t seed = 42;
    std::optional<int> targets;
    double C = 1.0;
    bool no_preprocess = false;
};

struct PlotArgs {
    std::string input;
    std::string color_by = "none";
    std::string out = "plot.svg";
    bool raw_time = false;
};

struct EvaluateArgs {
    std::string scenario_file;
    std::string preset;
    std::string algorithm = "all";
    std::optional<std::uint64_t> seed;
    std::optional<int> nk;
    std::string out = "evaluation";
    bool no_preprocess = false;
    double C = 1.0;
    std::size_t threads = 0;
};

struct ReproduceArgs {
    std::string out = "reproduce_out";
    std::uint64_t seed = 42;
    int nk = 20;
    std::size_t threads = 0;
};

Scenario resolve_scenario(const std::string& file, const std::string& preset) {
    if (!file.empty() && !preset.empty()) throw ConfigError("use either --scenario or --preset, not both");
    if (!file.empty()) return load_scenario_file(file);
    if (!preset.empty()) return preset_scenario(preset);
    throw ConfigError("a scenario is required (--scenario <file> or --preset large|medium|small)");
}

std::string dataset_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "dataset_%03d", index);
    return buf;
}

int cmd_generate(const GenerateArgs& args) {
    auto scenario = resolve_scenario(args.scenario_file, args.preset);
    if (args.seed) scenario.params.master_seed = *args.seed;
    if (args.nk) scenario.params.num_datasets = *args.nk;
    scenario.params.validate();

    const fs::path out = args.out;
    ordered_json files = ordered_json::array();
    for (int k = 1; k <= scenario.params.num_datasets; ++k) {
        const auto labeled = generate_labeled_dataset(scenario.road, scenario.params, k);
        const auto unlabeled = strip_labels(labeled, scenario.params.master_seed, k);
        const auto base = dataset_name(k);
        write_file_atomic(out / (base + ".csv"), dataset_csv(labeled));
        write_file_atomic(out / (base + "_unlabeled.csv"), dataset_csv(unlabeled));
        files.push_back(base + ".csv");
        files.push_back(base + "_unlabeled.csv");
    }
    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["command"] = "generate";
    manifest["scenario"] = ordered_json::parse(scenario_json(scenario));
    manifest["input"] = args.scenario_file.empty() ? "preset:" + args.preset : args.scenario_file;
    manifest["outputs"] = std::move(files);
    write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    write_file_atomic(out / "scenario.json", scenario_json(scenario));
    std::cout << "wrote " << scenario.params.num_datasets << " datasets of " << scenario.params.num_targets << " targets x "
              << scenario.road.num_sensors() << " sensors to " << out.string() << '\n';
    return kOk;
}

int cmd_associate(const AssociateArgs& args) {
    const auto algorithm = parse_algorithm(args.algorithm);
    const auto data = load_dataset_csv(args.dataset);
    if (data.measurements.empty()) throw DataError("dataset " + args.dataset + " has no measurements");
    const bool labeled = data.labeled();
    if (is_supervised(algorithm) && !labeled) {
        throw TrainingError(display_name(algorithm) + " needs a labeled dataset (target_id column) for training");
    }

    const auto points = project_to_reference(data);
    const auto features = feature_vectors(points, !args.no_preprocess);
    std::vector<int> truth;
    if (labeled) {
        for (const auto& p : points) truth.push_back(*p.label);
    }
    int num_targets = 0;
    if (args.targets) {
        num_targets = *args.targets;
    } else if (labeled) {
        num_targets = static_cast<int>(std::set<int>(truth.begin(), truth.end()).size());
    } else {
        // every target passes each sensor once, so sensor 1's count is the target count
        for (const auto& p : points) num_targets += p.sensor_index == 1 ? 1 : 0;
    }
    if (num_targets < 1) throw ConfigError("cannot determine the number of targets; pass --targets");

    LearnerOptions options;
    options.svm.C = args.C;
    Rng rng(derive_seed(args.seed, {static_cast<std::uint64_t>(Stream::learner)}));
    const auto assoc = associate_points(features, truth, algorithm, num_targets, options, rng);

    std::vector<int> labels = assoc.labels;
    if (is_supervised(algorithm)) {
        // SVM class ids are the dataset's own target ids; recover rows need them in [1, N]
        const std::set<int> ids(truth.begin(), truth.end());
        if (*ids.begin() < 1 || *ids.rbegin() > num_targets) {
            throw DataError("target ids must lie in [1, " + std::to_string(num_targets) + "]");
        }
    }
    const auto associated = recover_original(points, labels, num_targets, data.road.reference_position());
    for (const auto& w : associated.warnings) std::cerr << "warning: " << w << '\n';

    std::vector<ProjectedPoint> predicted_points = points;
    for (std::size_t i = 0; i < predicted_points.size(); ++i) predicted_points[i].label = labels[i];
    std::ostringstream projected_csv;
    write_projected_csv(projected_csv, predicted_points);

    const fs::path out = args.out;
    write_file_atomic(out / "associated.csv", associated_csv(associated));
    write_file_atomic(out / "projected.csv", projected_csv.str());
    write_file_atomic(out / "model.json", assoc.kmeans ? kmeans_model_json(*assoc.kmeans) : ova_model_json(*assoc.svm));

    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["command"] = "associate";
    manifest["input"] = args.dataset;
    manifest["algorithm"] = cli_name(algorithm);
    manifest["seed"] = args.seed;
    manifest["preprocess"] = !args.no_preprocess;
    manifest["num_targets"] = num_targets;
    manifest["svm_C"] = args.C;
    manifest["outputs"] = {"associated.csv", "projected.csv", "model.json"};

    std::cout << display_name(algorithm) << ": " << num_targets << " groups";
    if (labeled) {
        const double acc = clustering_accuracy(labels, truth);
        manifest["training_accuracy"] = acc;
        std::cout << (is_supervised(algorithm) ? ", training accuracy " : ", matched accuracy ") << format_number(acc);
        if (is_supervised(algorithm)) {
            CvConfig cv;
            cv.seed = derive_seed(args.seed, {static_cast<std::uint64_t>(Stream::cross_validation)});
            try {
                const auto kind = algorithm == Algorithm::linear_svm ? KernelKind::linear : KernelKind::quadratic;
                const auto res = cross_validate(features, truth, svm_learner(kind, options), cv);
                manifest["cv_accuracy"] = res.mean_accuracy;
                std::cout << ", 10-fold CV accuracy " << format_number(res.mean_accuracy);
            } catch (const ConfigError& e) {
                std::cerr << "warning: cross-validation skipped: " << e.what() << '\n';
            }
        }
    }
    std::cout << '\n';
    write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    return kOk;
}

int cmd_plot(const PlotArgs& args) {
    if (args.color_by != "none" && args.color_by != "truth" && args.color_by != "predicted") {
        throw ConfigError("--color-by must be none, truth or predicted");
    }
    const std::string text = read_file(args.input);
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    in.seekg(0);

    std::vector<ScatterPoint> scatter;
    const bool colour = args.color_by != "none";
    PlotOptions o;
    o.y_label = "velocity (units/s)";
    if (header == kProjectedHeader) {
        for (const auto& p : read_projected_csv(in)) {
            scatter.push_back({args.raw_time ? p.original_timestamp : p.projected_time, p.velocity,
                               colour ? p.label : std::nullopt});
        }
        o.x_label = args.raw_time ? "timestamp (s)" : "projected time at sensor 1 (s)";
    } else if (header == kDatasetHeader) {
        for (const auto& m : read_dataset_csv(in).measurements) {
            scatter.push_back({m.timestamp, m.velocity, colour ? m.target_id : std::nullopt});
        }
        o.x_label = "timestamp (s)";
    } else {
        throw DataError("unrecognized points file header in " + args.input);
    }
    o.title = fs::path(args.input).filename().string();
    write_file_atomic(args.out, scatter_svg(scatter, o));
    std::cout << "wrote " << args.out << " (" << scatter.size() << " points)\n";
    return kOk;
}

int cmd_evaluate(const EvaluateArgs& args) {
    auto scenario = resolve_scenario(args.scenario_file, args.preset);
    if (args.seed) scenario.params.master_seed = *args.seed;
    if (args.nk) scenario.params.num_datasets = *args.nk;
    ExperimentConfig config;
    config.scenarios = {scenario};
    if (args.algorithm != "all") config.algorithms = {parse_algorithm(args.algorithm)};
    config.num_datasets = scenario.params.num_datasets;
    config.preprocess = !args.no_preprocess;
    config.learner.svm.C = args.C;
    config.num_threads = args.threads;
    const auto reports = run_experiment(config);

    ordered_json summary = ordered_json::array();
    for (const auto& r : reports) {
        summary.push_back({{"scenario", r.scenario}, {"algorithm", r.algorithm}, {"mean_accuracy", r.mean_accuracy},
                           {"num_datasets", r.per_dataset_accuracy.size()}});
    }
    const fs::path out = args.out;
    write_file_atomic(out / "report.csv", report_csv(reports));
    write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["command"] = "evaluate";
    manifest["scenario"] = ordered_json::parse(scenario_json(scenario));
    manifest["algorithm"] = args.algorithm;
    manifest["preprocess"] = !args.no_preprocess;
    manifest["svm_C"] = args.C;
    write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
    std::cout << comparison_table(reports);
    return kOk;
}

int cmd_reproduce(const ReproduceArgs& args) {
    ReproduceOptions options;
    options.out_dir = args.out;
    options.seed = args.seed;
    options.num_datasets = args.nk;
    options.num_threads = args.threads;
    if (options.num_datasets < 1) throw ConfigError("--nk must be >= 1");
    const auto result = run_reproduce(options);
    std::cout << result.comparison_table;
    std::cout << "wrote " << result.files.size() << " files to " << options.out_dir.string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-sensor measurement-to-target association toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Generate labeled synthetic datasets");
    generate->add_option("--scenario", gen.scenario_file, "Scenario JSON file");
    generate->add_option("--preset", gen.preset, "Built-in scenario: large, medium or small");
    generate->add_option("--seed", gen.seed, "Override the scenario master seed");
    generate->add_option("--nk", gen.nk, "Override the number of datasets");
    generate->add_option("--out", gen.out, "Output directory");

    AssociateArgs asc;
    auto* associate = app.add_subcommand("associate", "Associate measurements to targets");
    associate->add_option("--dataset", asc.dataset, "Dataset CSV")->required();
    associate->add_option("--algorithm", asc.algorithm, "kmns, kmnspp, lsvm or qsvm");
    associate->add_option("--out", asc.out, "Output directory");
    associate->add_option("--seed", asc.seed, "Seed for k-means seeding and CV folds");
    associate->add_option("--targets", asc.targets, "Number of targets (default: inferred)");
    associate->add_option("--C", asc.C, "SVM penalty");
    associate->add_flag("--no-preprocess", asc.no_preprocess, "Use raw timestamps instead of projected times");

    PlotArgs plt;
    auto* plot = app.add_subcommand("plot", "Render a points file as an SVG scatter plot");
    plot->add_option("--input", plt.input, "Dataset or projected CSV")->required();
    plot->add_option("--color-by", plt.color_by, "none, truth or predicted (uses the file's label column)");
    plot->add_option("--out", plt.out, "Output SVG file");
    plot->add_flag("--raw-time", plt.raw_time, "Plot original timestamps for projected files");

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Score algorithms over a scenario's datasets");
    evaluate->add_option("--scenario", ev.scenario_file, "Scenario JSON file");
    evaluate->add_option("--preset", ev.preset, "Built-in scenario: large, medium or small");
    evaluate->add_option("--algorithm", ev.algorithm, "kmns, kmnspp, lsvm, qsvm or all");
    evaluate->add_option("--seed", ev.seed, "Override the scenario master seed");
    evaluate->add_option("--nk", ev.nk, "Number of datasets");
    evaluate->add_option("--out", ev.out, "Output directory");
    evaluate->add_option("--C", ev.C, "SVM penalty");
    evaluate->add_option("--threads", ev.threads, "Worker threads (0 = all cores)");
    evaluate->add_flag("--no-preprocess", ev.no_preprocess, "Use raw timestamps instead of projected times");

    ReproduceArgs rep;
    auto* reproduce = app.add_subcommand("reproduce", "Run the full comparison across the three scenarios");
    reproduce->add_option("--out", rep.out, "Output directory");
    reproduce->add_option("--seed", rep.seed, "Master seed");
    reproduce->add_option("--nk", rep.nk, "Datasets per scenario");
    reproduce->add_option("--threads", rep.threads, "Worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*generate) return cmd_generate(gen);
        if (*associate) return cmd_associate(asc);
        if (*plot) return cmd_plot(plt);
        if (*evaluate) return cmd_evaluate(ev);
        if (*reproduce) return cmd_reproduce(rep);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const InvariantError& e) {
        std::cerr << "internal invariant violated: " << e.what() << '\n';
        return kInternalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return kInternalError;
}
