#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/datagen.hpp"
#include "sensorassoc/point.hpp"

namespace sensorassoc {

/**
 * A measurement back-extrapolated to the reference sensor S_1:
 *   projected_time = original_timestamp - (R_n - R_1) / velocity.
 */
struct ProjectedPoint {
    int sensor_index = 1;
    double sensor_position = 0.0;
    double velocity = 0.0;
    double projected_time = 0.0;
    double original_timestamp = 0.0;
    std::optional<int> label;

    /// (projected_time, velocity)
    Point2 features() const { return {projected_time, velocity}; }
};

/// Throws DataError naming the row for any nonpositive or non-finite velocity.
std::vector<ProjectedPoint> project_to_reference(const Dataset& data);

/// Feature vectors for learners. With use_projection false the raw (timestamp, velocity) pairs are used.
std::vector<Point2> feature_vectors(std::span<const ProjectedPoint> points, bool use_projection = true);

/// Rows of the associated dataset, one per predicted target, each sorted by sensor index.
struct AssociatedDataset {
    std::vector<std::vector<Measurement>> rows;  ///< rows[i] holds target i + 1
    std::vector<std::string> warnings;
};

/**
 * Inverts the projection (t = t' + (R_n - R_1)/V) and groups measurements by
 * predicted label into num_targets rows. Each recovered Measurement carries
 * the predicted label as its target_id. Labels outside [1, num_targets]
 * throw DataError; an empty row produces a warning.
 */
AssociatedDataset recover_original(std::span<const ProjectedPoint> points, std::span<const int> predicted,
                                   int num_targets, double reference_position);

/// Affine map to zero mean and unit (population) variance per coordinate.
struct Scaling {
    Point2 mean{0.0, 0.0};
    Point2 scale{1.0, 1.0};

    Point2 apply(const Point2& p) const { return {(p[0] - mean[0]) / scale[0], (p[1] - mean[1]) / scale[1]}; }
    Point2 invert(const Point2& p) const { return {p[0] * scale[0] + mean[0], p[1] * scale[1] + mean[1]}; }
    std::vector<Point2> apply(std::span<const Point2> points) const;
};

/// A coordinate with zero variance keeps scale 1 and maps to 0.
Scaling fit_scaling(std::span<const Point2> points);

struct Standardized {
    std::vector<Point2> points;
    Scaling scaling;
};

Standardized standardize(std::span<const Point2> points);

}  // namespace sensorassoc
