#include "sensorassoc/experiment.hpp"

#include "sensorassoc/errors.hpp"
#include "sensorassoc/parallel.hpp"
#include "sensorassoc/preprocess.hpp"

namespace sensorassoc {

std::string display_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kmeans: return "Kmns";
        case Algorithm::kmeanspp: return "Kmns++";
        case Algorithm::linear_svm: return "LSVM";
        case Algorithm::quadratic_svm: return "QSVM";
    }
    return "?";
}

std::string cli_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::kmeans: return "kmns";
        case Algorithm::kmeanspp: return "kmnspp";
        case Algorithm::linear_svm: return "lsvm";
        case Algorithm::quadratic_svm: return "qsvm";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    for (auto a : kAllAlgorithms) {
        if (name == cli_name(a)) return a;
    }
    throw ConfigError("unknown algorithm '" + name + "' (expected kmns, kmnspp, lsvm or qsvm)");
}

bool is_supervised(Algorithm algorithm) {
    return algorithm == Algorithm::linear_svm || algorithm == Algorithm::quadratic_svm;
}

namespace {

KernelKind kernel_for(Algorithm algorithm) {
    return algorithm == Algorithm::linear_svm ? KernelKind::linear : KernelKind::quadratic;
}

}  // namespace

Association associate_points(std::span<const Point2> features, std::span<const int> truth, Algorithm algorithm,
                             int num_targets, const LearnerOptions& options, Rng& rng) {
    Association out;
    if (!is_supervised(algorithm)) {
        const auto seeding = algorithm == Algorithm::kmeans ? Seeding::uniform : Seeding::dsquared;
        auto config = KMeansConfig::defaults(static_cast<std::size_t>(num_targets), seeding);
        if (options.kmeans_restarts) config.num_restarts = *options.kmeans_restarts;
        auto model = lloyd_fit(features, config, rng);
        out.labels.reserve(model.assignments.size());
        for (auto a : model.assignments) out.labels.push_back(static_cast<int>(a) + 1);
        out.kmeans = std::move(model);
        return out;
    }
    if (truth.size() != features.size()) {
        throw TrainingError(display_name(algorithm) + " needs a true target id for every measurement");
    }
    auto model = train_ova(features, truth, Kernel{kernel_for(algorithm), 1.0}, options.svm, options.standardize_svm);
    out.labels = model.predict(features);
    out.svm = std::move(model);
    return out;
}

Learner svm_learner(KernelKind kind, const LearnerOptions& options) {
    return [kind, options](std::span<const Point2> train_x, std::span<const int> train_y,
                           std::span<const Point2> test_x) {
        const auto model = train_ova(train_x, train_y, Kernel{kind, 1.0}, options.svm, options.standardize_svm);
        return model.predict(test_x);
    };
}

std::vector<AccuracyReport> run_experiment(const ExperimentConfig& config) {
    if (config.num_datasets < 1) throw ConfigError("experiment: need at least one dataset");
    const auto n_scen = config.scenarios.size();
    const auto n_alg = config.algorithms.size();
    const auto n_data = static_cast<std::size_t>(config.num_datasets);
    for (const auto& s : config.scenarios) s.params.validate();

    // accuracy[(s * n_alg + a) * n_data + d]
    std::vector<double> accuracy(n_scen * n_alg * n_data, 0.0);
    std::vector<LabelMatching> matchings(accuracy.size());

    parallel_for(accuracy.size(), config.num_threads, [&](std::size_t cell) {
        const std::size_t d = cell % n_data;
        const std::size_t a = (cell / n_data) % n_alg;
        const std::size_t s = cell / (n_data * n_alg);
        const auto& scenario = config.scenarios[s];
        const auto algorithm = config.algorithms[a];
        const int dataset_index = static_cast<int>(d + 1);
        const auto seed = scenario.params.master_seed;

        const auto labeled = generate_labeled_dataset(scenario.road, scenario.params, dataset_index);
        Rng shuffle_rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::shuffle), d + 1}));
        const auto shuffled = shuffle_within_sensors(labeled, shuffle_rng);
        const auto points = project_to_reference(shuffled);
        const auto features = feature_vectors(points, config.preprocess);
        std::vector<int> truth;
        truth.reserve(points.size());
        for (const auto& p : points) truth.push_back(*p.label);

        if (is_supervised(algorithm)) {
            CvConfig cv;
            cv.folds = config.cv_folds;
            cv.seed = derive_seed(seed, {static_cast<std::uint64_t>(Stream::cross_validation), d + 1});
            const auto result = cross_validate(features, truth, svm_learner(kernel_for(algorithm), config.learner), cv);
            accuracy[cell] = result.mean_accuracy;
        } else {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::learner), d + 1,
                                       static_cast<std::uint64_t>(algorithm)}));
            const auto assoc = associate_points(features, {}, algorithm, scenario.params.num_targets, config.learner, rng);
            matchings[cell] = match_labels(assoc.labels, truth);
            accuracy[cell] = static_cast<double>(matchings[cell].agreements) / static_cast<double>(truth.size());
        }
    });

    std::vector<AccuracyReport> reports;
    reports.reserve(n_scen * n_alg);
    for (std::size_t s = 0; s < n_scen; ++s) {
        for (std::size_t a = 0; a < n_alg; ++a) {
            AccuracyReport r;
            r.algorithm = display_name(config.algorithms[a]);
            r.scenario = config.scenarios[s].params.name;
            const std::size_t base = (s * n_alg + a) * n_data;
            r.per_dataset_accuracy.assign(accuracy.begin() + static_cast<std::ptrdiff_t>(base),
                                          accuracy.begin() + static_cast<std::ptrdiff_t>(base + n_data));
            if (!is_supervised(config.algorithms[a])) {
                r.matchings.assign(matchings.begin() + static_cast<std::ptrdiff_t>(base),
                                   matchings.begin() + static_cast<std::ptrdiff_t>(base + n_data));
            }
            r.mean_accuracy = mean(r.per_dataset_accuracy);
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

}  // namespace sensorassoc
