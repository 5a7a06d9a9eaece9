#pragma once

#include <array>
#include <cmath>

namespace sensorassoc {

/// A 2-D feature vector: (time, velocity) in the learners' input space.
using Point2 = std::array<double, 2>;

inline double squared_distance(const Point2& a, const Point2& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

inline double dot(const Point2& a, const Point2& b) { return a[0] * b[0] + a[1] * b[1]; }

inline bool is_finite(const Point2& p) { return std::isfinite(p[0]) && std::isfinite(p[1]); }

}  // namespace sensorassoc
