#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/point.hpp"
#include "sensorassoc/preprocess.hpp"

namespace sensorassoc {

enum class KernelKind { linear, quadratic };

std::string to_string(KernelKind kind);

/// linear: x.y    quadratic: (x.y + offset)^2
struct Kernel {
    KernelKind kind = KernelKind::linear;
    double offset = 1.0;

    double operator()(const Point2& x, const Point2& y) const;
};

/// Kernel on arbitrary-dimension inputs. Throws std::invalid_argument on a dimension mismatch.
double kernel_eval(const Kernel& kernel, std::span<const double> x, std::span<const double> y);

struct SvmConfig {
    double C = 1.0;
    /// Maximal-violating-pair gap at which the solver stops.
    double kkt_tolerance = 1e-3;
    std::size_t max_iterations = 1'000'000;
    /// Multipliers at or below this are not kept as support vectors.
    double alpha_floor = 1e-8;
    /// Worker threads for one-vs-all training (0 = hardware concurrency).
    std::size_t num_threads = 1;

    void validate() const;
};

/// Full solution of the dual QP, one multiplier per training sample.
struct DualSolution {
    std::vector<double> alphas;
    double bias = 0.0;
    /// 1/2 sum_ij y_i y_j a_i a_j K_ij - sum_i a_i (the minimized form)
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct BinarySvmModel {
    Kernel kernel;
    double C = 1.0;
    std::vector<Point2> support_vectors;
    std::vector<int> support_labels;  ///< +1 / -1
    std::vector<double> alphas;
    double bias = 0.0;
    std::size_t iterations = 0;
    bool converged = false;

    /// f(x) = sum_i y_i a_i K(x_i, x) + b; positive means the +1 class.
    double decision_value(const Point2& x) const;
};

/// Minimized dual objective of alphas for the given samples.
double dual_objective(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel,
                      std::span<const double> alphas);

/**
 * Solves the soft-margin dual by sequential minimal optimization: each step
 * picks the maximal violating pair with second-order working-set selection
 * and updates the two multipliers analytically. Labels must be +1 / -1 with
 * both present (TrainingError otherwise).
 */
DualSolution solve_dual_full(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel,
                             const SvmConfig& config);

BinarySvmModel solve_dual(std::span<const Point2> samples, std::span<const int> labels, const Kernel& kernel,
                          const SvmConfig& config);

/// One binary model per class (class vs rest), all on shared standardized features.
struct OvaSvmModel {
    std::vector<int> class_ids;  ///< ascending
    std::vector<BinarySvmModel> class_models;
    Scaling scaling;
    Kernel kernel;
    double C = 1.0;

    /// Decision value of every class model at x (x in unscaled feature units).
    std::vector<double> decision_values(const Point2& x) const;
    /// argmax of decision_values; ties go to the lowest class id.
    int predict(const Point2& x) const;
    std::vector<int> predict(std::span<const Point2> xs) const;
};

/// Throws TrainingError with fewer than 2 classes.
OvaSvmModel train_ova(std::span<const Point2> samples, std::span<const int> class_ids, const Kernel& kernel,
                      const SvmConfig& config, bool standardize_features = true);

int predict_ova(const OvaSvmModel& model, const Point2& x);

}  // namespace sensorassoc
