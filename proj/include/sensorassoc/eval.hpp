#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/point.hpp"

namespace sensorassoc {

/// Optimal one-to-one map from predicted ids to true ids.
struct LabelMatching {
    std::map<int, int> predicted_to_truth;
    std::size_t agreements = 0;
};

/**
 * Maximizes the number of points whose mapped predicted id equals the true
 * id, solved exactly on the confusion matrix. Throws std::invalid_argument
 * on a length mismatch.
 */
LabelMatching match_labels(std::span<const int> predicted, std::span<const int> truth);

/// Agreements under the optimal matching divided by the number of points.
double clustering_accuracy(std::span<const int> predicted, std::span<const int> truth);

struct CvConfig {
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool stratified = true;
};

/**
 * Fold index for every sample. When stratified, each class's samples are
 * shuffled and dealt round-robin over the folds, starting where the previous
 * class stopped. Throws ConfigError if a class has fewer samples than folds.
 */
std::vector<std::size_t> assign_folds(std::span<const int> labels, const CvConfig& cv);

/// Trains on (train_x, train_y) and returns one predicted id per test point.
using Learner = std::function<std::vector<int>(std::span<const Point2> train_x, std::span<const int> train_y,
                                               std::span<const Point2> test_x)>;

struct CvResult {
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
};

/// The learner only ever sees training-fold samples; any feature scaling must be fitted inside it.
CvResult cross_validate(std::span<const Point2> x, std::span<const int> y, const Learner& learner, const CvConfig& cv);

struct AccuracyReport {
    std::string algorithm;
    std::string scenario;
    std::vector<double> per_dataset_accuracy;
    double mean_accuracy = 0.0;
    /// One matching per dataset for unsupervised algorithms; empty for SVM.
    std::vector<LabelMatching> matchings;
};

double mean(std::span<const double> values);

}  // namespace sensorassoc
