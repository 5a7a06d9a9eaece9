#include "sensorassoc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sensorassoc/errors.hpp"

namespace sensorassoc {

std::vector<ProjectedPoint> project_to_reference(const Dataset& data) {
    const double r1 = data.road.reference_position();
    std::vector<ProjectedPoint> out;
    out.reserve(data.measurements.size());
    for (std::size_t row = 0; row < data.measurements.size(); ++row) {
        const auto& m = data.measurements[row];
        if (!(m.velocity > 0.0) || !std::isfinite(m.velocity) || !std::isfinite(m.timestamp)) {
            std::ostringstream msg;
            msg << "row " << row + 1 << " (sensor " << m.sensor_index << "): velocity " << m.velocity
                << " must be positive and finite";
            throw DataError(msg.str());
        }
        ProjectedPoint p;
        p.sensor_index = m.sensor_index;
        p.sensor_position = m.sensor_position;
        p.velocity = m.velocity;
        p.original_timestamp = m.timestamp;
        p.projected_time = m.timestamp - (m.sensor_position - r1) / m.velocity;
        p.label = m.target_id;
        out.push_back(p);
    }
    return out;
}

std::vector<Point2> feature_vectors(std::span<const ProjectedPoint> points, bool use_projection) {
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back({use_projection ? p.projected_time : p.original_timestamp, p.velocity});
    }
    return out;
}

AssociatedDataset recover_original(std::span<const ProjectedPoint> points, std::span<const int> predicted,
                                   int num_targets, double reference_position) {
    if (points.size() != predicted.size()) {
        throw std::invalid_argument("recover_original: one predicted label per point is required");
    }
    AssociatedDataset out;
    out.rows.resize(static_cast<std::size_t>(num_targets));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int label = predicted[i];
        if (label < 1 || label > num_targets) {
            std::ostringstream msg;
            msg << "point " << i + 1 << ": predicted label " << label << " outside [1, " << num_targets << "]";
            throw DataError(msg.str());
        }
        const auto& p = points[i];
        Measurement m;
        m.sensor_index = p.sensor_index;
        m.sensor_position = p.sensor_position;
        m.velocity = p.velocity;
        m.timestamp = p.projected_time + (p.sensor_position - reference_position) / p.velocity;
        m.target_id = label;
        out.rows[static_cast<std::size_t>(label - 1)].push_back(m);
    }
    for (std::size_t t = 0; t < out.rows.size(); ++t) {
        auto& row = out.rows[t];
        std::stable_sort(row.begin(), row.end(),
                         [](const Measurement& a, const Measurement& b) { return a.sensor_index < b.sensor_index; });
        if (row.empty()) out.warnings.push_back("target " + std::to_string(t + 1) + " has no assigned measurements");
    }
    return out;
}

std::vector<Point2> Scaling::apply(std::span<const Point2> points) const {
    std::vector<Point2> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(apply(p));
    return out;
}

Scaling fit_scaling(std::span<const Point2> points) {
    Scaling s;
    if (points.empty()) return s;
    const auto n = static_cast<double>(points.size());
    for (int d = 0; d < 2; ++d) {
        double mean = 0.0;
        for (const auto& p : points) mean += p[d];
        mean /= n;
        double var = 0.0;
        for (const auto& p : points) var += (p[d] - mean) * (p[d] - mean);
        var /= n;
        s.mean[d] = mean;
        const double sd = std::sqrt(var);
        // Round-off in the mean can leave a spurious variance for constant data.
        s.scale[d] = sd > 1e-12 * std::max(1.0, std::abs(mean)) ? sd : 1.0;
    }
    return s;
}

Standardized standardize(std::span<const Point2> points) {
    Standardized out;
    out.scaling = fit_scaling(points);
    out.points = out.scaling.apply(points);
    return out;
}

}  // namespace sensorassoc
