#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/datagen.hpp"
#include "sensorassoc/eval.hpp"
#include "sensorassoc/kmeans.hpp"
#include "sensorassoc/svm.hpp"

namespace sensorassoc {

enum class Algorithm { kmeans, kmeanspp, linear_svm, quadratic_svm };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::kmeans, Algorithm::kmeanspp, Algorithm::linear_svm,
                                               Algorithm::quadratic_svm};

/// Display names used in reports: Kmns, Kmns++, LSVM, QSVM.
std::string display_name(Algorithm algorithm);
/// Command-line names: kmns, kmnspp, lsvm, qsvm.
std::string cli_name(Algorithm algorithm);
/// Parses a command-line name. Throws ConfigError on an unknown name.
Algorithm parse_algorithm(const std::string& name);
bool is_supervised(Algorithm algorithm);

struct LearnerOptions {
    SvmConfig svm;
    /// Standardize features before SVM training (fitted on the training input only).
    bool standardize_svm = true;
    /// Leave unset to use KMeansConfig::defaults() restarts for the seeding mode.
    std::optional<std::size_t> kmeans_restarts;
};

struct Association {
    std::vector<int> labels;  ///< predicted target id per point, 1-based
    std::optional<KMeansModel> kmeans;
    std::optional<OvaSvmModel> svm;
};

/**
 * Runs one algorithm on feature vectors. K-means ignores truth; the SVM
 * variants train on (features, truth) and predict the same points, so truth
 * is required for them (TrainingError when absent).
 */
Association associate_points(std::span<const Point2> features, std::span<const int> truth, Algorithm algorithm,
                             int num_targets, const LearnerOptions& options, Rng& rng);

/// Cross-validation learner that trains a one-vs-all SVM of the given kind on each training fold.
Learner svm_learner(KernelKind kind, const LearnerOptions& options);

struct ExperimentConfig {
    std::vector<Scenario> scenarios;
    std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
    int num_datasets = 20;
    /// false runs the learners on raw (timestamp, velocity) pairs.
    bool preprocess = true;
    LearnerOptions learner;
    std::size_t cv_folds = 10;
    std::size_t num_threads = 0;
};

/**
 * For each (scenario, algorithm): generates num_datasets datasets from the
 * scenario's master seed, projects them, and scores each one (matched
 * accuracy for K-means, stratified cross-validation for SVM). Reports come
 * back scenario-major in algorithm order, regardless of threading.
 */
std::vector<AccuracyReport> run_experiment(const ExperimentConfig& config);

}  // namespace sensorassoc
