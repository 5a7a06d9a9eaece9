#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/point.hpp"
#include "sensorassoc/rng.hpp"

namespace sensorassoc {

enum class Seeding { uniform, dsquared };

std::string to_string(Seeding seeding);

struct KMeansConfig {
    std::size_t k = 1;
    std::size_t max_iters = 300;
    /// Stop once no center moves farther than this (feature units).
    double shift_tolerance = 1e-6;
    Seeding seeding = Seeding::uniform;
    std::size_t num_restarts = 10;
    /// Restarts are distributed over this many threads; results do not depend on it.
    std::size_t num_threads = 1;

    /// 10 restarts for uniform seeding, 1 for D^2 seeding.
    static KMeansConfig defaults(std::size_t k, Seeding seeding);
    void validate() const;
};

struct KMeansModel {
    std::vector<Point2> centers;
    std::vector<std::size_t> assignments;
    std::vector<double> cost_history;  ///< cost after the seeding assignment and after every iteration
    std::size_t iterations_run = 0;
    std::size_t best_restart = 0;

    double final_cost() const { return cost_history.empty() ? 0.0 : cost_history.back(); }
};

/// Arithmetic mean. Throws std::invalid_argument on empty input.
Point2 centroid(std::span<const Point2> points);

/// Sum of squared distances from each point to its nearest center.
double cost(std::span<const Point2> points, std::span<const Point2> centers);

/// Index of the nearest center; ties go to the lowest index.
std::size_t nearest_center(const Point2& p, std::span<const Point2> centers);
std::vector<std::size_t> assign(std::span<const Point2> points, std::span<const Point2> centers);

/// Distinct points in first-occurrence order.
std::vector<Point2> distinct_points(std::span<const Point2> points);

/// k distinct data points drawn uniformly without replacement. Throws ConfigError if k exceeds the distinct count.
std::vector<Point2> seed_uniform(std::span<const Point2> points, std::size_t k, Rng& rng);

/**
 * K-means++ seeding. The first center is a uniformly chosen data point; each
 * further center is data point x with probability D(x)^2 / sum D(.)^2, where
 * D is the distance to the nearest center chosen so far. If every remaining
 * D is zero the choice falls back to a uniform draw over unchosen distinct points.
 */
std::vector<Point2> seed_dsquared(std::span<const Point2> points, std::size_t k, Rng& rng);

/// Lloyd refinement from the given initial centers (a single run).
KMeansModel lloyd_refine(std::span<const Point2> points, std::vector<Point2> centers, std::size_t max_iters,
                         double shift_tolerance);

/**
 * Best-of-num_restarts Lloyd fit. Each restart seeds from its own stream
 * derived from one draw of rng, so the result is independent of threading;
 * the lowest final cost wins, ties to the lowest restart index.
 */
KMeansModel lloyd_fit(std::span<const Point2> points, const KMeansConfig& config, Rng& rng);

}  // namespace sensorassoc
