#include "sensorassoc/eval.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "sensorassoc/assignment.hpp"
#include "sensorassoc/errors.hpp"
#include "sensorassoc/rng.hpp"

namespace sensorassoc {

LabelMatching match_labels(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("match_labels: length mismatch");
    const std::set<int> pred_set(predicted.begin(), predicted.end());
    const std::set<int> truth_set(truth.begin(), truth.end());
    const std::vector<int> pred_ids(pred_set.begin(), pred_set.end());
    const std::vector<int> truth_ids(truth_set.begin(), truth_set.end());
    const std::size_t n = std::max(pred_ids.size(), truth_ids.size());

    auto index_of = [](const std::vector<int>& ids, int v) {
        return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
    };
    std::vector<std::vector<double>> confusion(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        confusion[index_of(pred_ids, predicted[i])][index_of(truth_ids, truth[i])] += 1.0;
    }
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) cost[r][c] = -confusion[r][c];
    }
    const auto column = min_cost_assignment(cost);

    LabelMatching out;
    for (std::size_t r = 0; r < pred_ids.size(); ++r) {
        const std::size_t c = column[r];
        if (c >= truth_ids.size()) continue;  // padded column: this cluster maps to no target
        out.predicted_to_truth[pred_ids[r]] = truth_ids[c];
        out.agreements += static_cast<std::size_t>(confusion[r][c]);
    }
    return out;
}

double clustering_accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (truth.empty()) return 1.0;
    const auto m = match_labels(predicted, truth);
    return static_cast<double>(m.agreements) / static_cast<double>(truth.size());
}

std::vector<std::size_t> assign_folds(std::span<const int> labels, const CvConfig& cv) {
    if (cv.folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (labels.size() < cv.folds) throw ConfigError("cross-validation: fewer samples than folds");
    Rng rng(cv.seed);
    std::vector<std::size_t> fold(labels.size());
    if (!cv.stratified) {
        std::vector<std::size_t> order(labels.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        rng.shuffle(order);
        for (std::size_t k = 0; k < order.size(); ++k) fold[order[k]] = k % cv.folds;
        return fold;
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    std::size_t offset = 0;
    for (auto& [cls, members] : by_class) {
        if (members.size() < cv.folds) {
            throw ConfigError("cross-validation: class " + std::to_string(cls) + " has " +
                              std::to_string(members.size()) + " samples, fewer than " + std::to_string(cv.folds) +
                              " folds");
        }
        rng.shuffle(members);
        for (std::size_t k = 0; k < members.size(); ++k) fold[members[k]] = (offset + k) % cv.folds;
        offset = (offset + members.size()) % cv.folds;
    }
    return fold;
}

CvResult cross_validate(std::span<const Point2> x, std::span<const int> y, const Learner& learner, const CvConfig& cv) {
    if (x.size() != y.size()) throw std::invalid_argument("cross_validate: one label per sample is required");
    const auto fold = assign_folds(y, cv);
    CvResult out;
    for (std::size_t f = 0; f < cv.folds; ++f) {
        std::vector<Point2> train_x, test_x;
        std::vector<int> train_y, test_y;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (fold[i] == f) {
                test_x.push_back(x[i]);
                test_y.push_back(y[i]);
            } else {
                train_x.push_back(x[i]);
                train_y.push_back(y[i]);
            }
        }
        if (test_x.empty()) continue;
        const auto predicted = learner(train_x, train_y, test_x);
        if (predicted.size() != test_x.size()) throw std::logic_error("learner returned the wrong number of predictions");
        std::size_t correct = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == test_y[i] ? 1 : 0;
        out.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test_y.size()));
    }
    out.mean_accuracy = mean(out.fold_accuracy);
    return out;
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

}  // namespace sensorassoc
