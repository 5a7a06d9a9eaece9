#include "sensorassoc/reproduce.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sensorassoc/dataset_io.hpp"
#include "sensorassoc/preprocess.hpp"
#include "sensorassoc/svg_plot.hpp"

namespace sensorassoc {

using nlohmann::ordered_json;

std::vector<Scenario> reference_scenarios(std::uint64_t seed) {
    std::vector<Scenario> out{large_variance_scenario(), medium_variance_scenario(), small_variance_scenario()};
    for (std::size_t i = 0; i < out.size(); ++i) out[i].params.master_seed = derive_seed(seed, {i + 1});
    return out;
}

std::string report_csv(std::span<const AccuracyReport> reports) {
    std::ostringstream out;
    out << "scenario,algorithm,dataset_index,accuracy\n";
    for (const auto& r : reports) {
        for (std::size_t d = 0; d < r.per_dataset_accuracy.size(); ++d) {
            out << r.scenario << ',' << r.algorithm << ',' << d + 1 << ',' << format_number(r.per_dataset_accuracy[d])
                << '\n';
        }
    }
    return out.str();
}

std::string comparison_table(std::span<const AccuracyReport> reports) {
    std::vector<std::string> scenarios, algorithms;
    std::map<std::pair<std::string, std::string>, double> cell;
    for (const auto& r : reports) {
        if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end()) scenarios.push_back(r.scenario);
        if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end()) {
            algorithms.push_back(r.algorithm);
        }
        cell[{r.scenario, r.algorithm}] = r.mean_accuracy;
    }
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-10s", "scenario");
    out << buf;
    for (const auto& a : algorithms) {
        std::snprintf(buf, sizeof buf, " %14s", a.c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& s : scenarios) {
        std::snprintf(buf, sizeof buf, "%-10s", s.c_str());
        out << buf;
        for (const auto& a : algorithms) {
            auto it = cell.find({s, a});
            if (it == cell.end()) {
                std::snprintf(buf, sizeof buf, " %14s", "-");
            } else {
                std::snprintf(buf, sizeof buf, " %14.4f", it->second);
            }
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

ordered_json report_json(const AccuracyReport& r) {
    ordered_json j;
    j["scenario"] = r.scenario;
    j["algorithm"] = r.algorithm;
    j["mean_accuracy"] = r.mean_accuracy;
    j["num_datasets"] = r.per_dataset_accuracy.size();
    return j;
}

PlotOptions plot_options(std::string title, bool projected) {
    PlotOptions o;
    o.title = std::move(title);
    o.x_label = projected ? "projected time at sensor 1 (s)" : "timestamp (s)";
    o.y_label = "velocity (units/s)";
    return o;
}

std::vector<ScatterPoint> scatter(const std::vector<Point2>& features, const std::vector<int>* groups) {
    std::vector<ScatterPoint> out;
    out.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        ScatterPoint p{features[i][0], features[i][1], std::nullopt};
        if (groups) p.group = (*groups)[i];
        out.push_back(p);
    }
    return out;
}

/// Renames predicted ids through the optimal matching so colours line up with the truth plot.
std::vector<int> matched(const std::vector<int>& predicted, const std::vector<int>& truth) {
    const auto m = match_labels(predicted, truth);
    std::vector<int> out;
    out.reserve(predicted.size());
    for (int p : predicted) {
        auto it = m.predicted_to_truth.find(p);
        out.push_back(it == m.predicted_to_truth.end() ? p : it->second);
    }
    return out;
}

}  // namespace

ReproduceResult run_reproduce(const ReproduceOptions& options) {
    ReproduceResult result;
    const auto scenarios = reference_scenarios(options.seed);

    ExperimentConfig main;
    main.scenarios = scenarios;
    main.num_datasets = options.num_datasets;
    main.num_threads = options.num_threads;
    result.reports = run_experiment(main);

    ExperimentConfig ablation = main;
    ablation.algorithms = {Algorithm::kmeanspp};
    ablation.preprocess = false;
    result.ablation = run_experiment(ablation);
    for (auto& r : result.ablation) r.algorithm += " raw";

    for (double c : options.c_sweep) {
        ExperimentConfig sweep = main;
        sweep.algorithms = {Algorithm::linear_svm, Algorithm::quadratic_svm};
        sweep.learner.svm.C = c;
        for (auto r : run_experiment(sweep)) {
            r.algorithm += " C=" + format_number(c);
            result.c_sweep.push_back(std::move(r));
        }
    }

    std::vector<AccuracyReport> all = result.reports;
    all.insert(all.end(), result.ablation.begin(), result.ablation.end());
    all.insert(all.end(), result.c_sweep.begin(), result.c_sweep.end());
    result.comparison_table = comparison_table(result.reports) + "\nablation (no preprocessing):\n" +
                              comparison_table(result.ablation) + "\nSVM penalty sweep:\n" +
                              comparison_table(result.c_sweep);

    auto emit = [&](const std::string& name, const std::string& content) {
        write_file_atomic(options.out_dir / name, content);
        result.files.emplace_back(name);
    };
    emit("report.csv", report_csv(all));
    emit("comparison.txt", result.comparison_table);

    ordered_json summary;
    summary["seed"] = options.seed;
    summary["num_datasets"] = options.num_datasets;
    auto section = [](const std::vector<AccuracyReport>& rs) {
        auto arr = ordered_json::array();
        for (const auto& r : rs) arr.push_back(report_json(r));
        return arr;
    };
    summary["results"] = section(result.reports);
    summary["ablation_no_preprocessing"] = section(result.ablation);
    summary["svm_penalty_sweep"] = section(result.c_sweep);
    emit("summary.json", summary.dump(2) + "\n");

    // Figures from dataset 1 of each scenario.
    for (const auto& scenario : scenarios) {
        const auto& name = scenario.params.name;
        const auto labeled = generate_labeled_dataset(scenario.road, scenario.params, 1);
        Rng shuffle_rng(derive_seed(scenario.params.master_seed, {static_cast<std::uint64_t>(Stream::shuffle), 1}));
        const auto shuffled = shuffle_within_sensors(labeled, shuffle_rng);
        const auto points = project_to_reference(shuffled);
        std::vector<int> truth;
        for (const auto& p : points) truth.push_back(*p.label);
        const auto raw = feature_vectors(points, false);
        const auto projected = feature_vectors(points, true);

        emit("raw_" + name + ".svg", scatter_svg(scatter(raw, nullptr), plot_options("Unlabeled dataset (" + name + " velocity variance)", false)));
        emit("projected_" + name + ".svg",
             scatter_svg(scatter(projected, &truth), plot_options("Pre-processed dataset (" + name + ")", true)));

        LearnerOptions learner;
        Rng rng(derive_seed(scenario.params.master_seed, {static_cast<std::uint64_t>(Stream::learner), 1,
                                                          static_cast<std::uint64_t>(Algorithm::kmeanspp)}));
        const auto kpp = associate_points(projected, {}, Algorithm::kmeanspp, scenario.params.num_targets, learner, rng);
        const auto kpp_labels = matched(kpp.labels, truth);
        emit("kmnspp_" + name + ".svg",
             scatter_svg(scatter(projected, &kpp_labels), plot_options("K-means++ on pre-processed data (" + name + ")", true)));

        const auto qsvm = associate_points(projected, truth, Algorithm::quadratic_svm, scenario.params.num_targets, learner, rng);
        emit("qsvm_" + name + ".svg",
             scatter_svg(scatter(projected, &qsvm.labels), plot_options("Quadratic SVM on pre-processed data (" + name + ")", true)));

        if (name == "large") {
            Rng raw_rng(derive_seed(scenario.params.master_seed, {static_cast<std::uint64_t>(Stream::learner), 1,
                                                                  static_cast<std::uint64_t>(Algorithm::kmeanspp)}));
            const auto kraw = associate_points(raw, {}, Algorithm::kmeanspp, scenario.params.num_targets, learner, raw_rng);
            const auto kraw_labels = matched(kraw.labels, truth);
            emit("kmnspp_raw_" + name + ".svg",
                 scatter_svg(scatter(raw, &kraw_labels), plot_options("K-means++ on unprocessed data (" + name + ")", false)));
        }
    }

    std::vector<std::string> categories;
    for (const auto& s : scenarios) categories.push_back(s.params.name);
    std::vector<std::string> series;
    std::vector<std::vector<double>> values;
    for (auto a : kAllAlgorithms) {
        series.push_back(display_name(a));
        std::vector<double> row;
        for (const auto& s : scenarios) {
            for (const auto& r : result.reports) {
                if (r.scenario == s.params.name && r.algorithm == display_name(a)) row.push_back(r.mean_accuracy);
            }
        }
        values.push_back(row);
    }
    PlotOptions bar;
    bar.title = "Accuracy for processed datasets";
    bar.x_label = "velocity variance scenario";
    bar.y_label = "mean accuracy";
    emit("accuracy.svg", bar_chart_svg(categories, series, values, bar));

    ordered_json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["command"] = "reproduce";
    manifest["seed"] = options.seed;
    manifest["num_datasets"] = options.num_datasets;
    manifest["svm_C"] = 1.0;
    manifest["svm_penalty_sweep"] = options.c_sweep;
    manifest["algorithms"] = ordered_json::array();
    for (auto a : kAllAlgorithms) manifest["algorithms"].push_back(cli_name(a));
    manifest["scenarios"] = ordered_json::array();
    for (const auto& s : scenarios) manifest["scenarios"].push_back(ordered_json::parse(scenario_json(s)));
    manifest["outputs"] = ordered_json::array();
    for (const auto& f : result.files) manifest["outputs"].push_back(f.string());
    emit("manifest.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace sensorassoc
