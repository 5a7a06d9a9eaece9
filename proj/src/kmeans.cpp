#include "sensorassoc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sensorassoc/errors.hpp"
#include "sensorassoc/parallel.hpp"

namespace sensorassoc {

std::string to_string(Seeding seeding) { return seeding == Seeding::uniform ? "uniform" : "dsquared"; }

KMeansConfig KMeansConfig::defaults(std::size_t k, Seeding seeding) {
    KMeansConfig c;
    c.k = k;
    c.seeding = seeding;
    c.num_restarts = seeding == Seeding::uniform ? 10 : 1;
    return c;
}

void KMeansConfig::validate() const {
    if (k < 1) throw ConfigError("k-means: k must be >= 1");
    if (max_iters < 1) throw ConfigError("k-means: max_iters must be >= 1");
    if (!(shift_tolerance >= 0.0)) throw ConfigError("k-means: shift_tolerance must be >= 0");
    if (num_restarts < 1) throw ConfigError("k-means: num_restarts must be >= 1");
}

Point2 centroid(std::span<const Point2> points) {
    if (points.empty()) throw std::invalid_argument("centroid of an empty set");
    Point2 sum{0.0, 0.0};
    for (const auto& p : points) {
        sum[0] += p[0];
        sum[1] += p[1];
    }
    const auto n = static_cast<double>(points.size());
    return {sum[0] / n, sum[1] / n};
}

std::size_t nearest_center(const Point2& p, std::span<const Point2> centers) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::vector<std::size_t> assign(std::span<const Point2> points, std::span<const Point2> centers) {
    if (centers.empty()) throw std::invalid_argument("assign: at least one center is required");
    std::vector<std::size_t> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = nearest_center(points[i], centers);
    return out;
}

double cost(std::span<const Point2> points, std::span<const Point2> centers) {
    if (centers.empty()) throw std::invalid_argument("cost: at least one center is required");
    double total = 0.0;
    for (const auto& p : points) total += squared_distance(p, centers[nearest_center(p, centers)]);
    return total;
}

std::vector<Point2> distinct_points(std::span<const Point2> points) {
    std::vector<Point2> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<char> seen(sorted.size(), 0);
    std::vector<Point2> out;
    out.reserve(sorted.size());
    for (const auto& p : points) {
        const auto idx = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin());
        if (!seen[idx]) {
            seen[idx] = 1;
            out.push_back(p);
        }
    }
    return out;
}

namespace {

void require_distinct(std::size_t k, std::size_t distinct) {
    if (k > distinct) {
        throw ConfigError("k-means: k = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                          " distinct data points");
    }
}

}  // namespace

std::vector<Point2> seed_uniform(std::span<const Point2> points, std::size_t k, Rng& rng) {
    auto pool = distinct_points(points);
    require_distinct(k, pool.size());
    // Partial Fisher-Yates: the first k slots become the sample.
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

std::vector<Point2> seed_dsquared(std::span<const Point2> points, std::size_t k, Rng& rng) {
    const auto distinct = distinct_points(points);
    require_distinct(k, distinct.size());
    std::vector<Point2> centers;
    centers.reserve(k);
    if (k == 0) return centers;

    centers.push_back(points[static_cast<std::size_t>(rng.below(points.size()))]);
    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centers[0]);

    while (centers.size() < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        Point2 next;
        if (total > 0.0) {
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            std::size_t pick = points.size();
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (d2[i] <= 0.0) continue;
                acc += d2[i];
                pick = i;
                if (target < acc) break;
            }
            next = points[pick];
        } else {
            std::vector<Point2> unchosen;
            for (const auto& p : distinct) {
                if (std::find(centers.begin(), centers.end(), p) == centers.end()) unchosen.push_back(p);
            }
            next = unchosen[static_cast<std::size_t>(rng.below(unchosen.size()))];
        }
        centers.push_back(next);
        for (std::size_t i = 0; i < points.size(); ++i) d2[i] = std::min(d2[i], squared_distance(points[i], next));
    }
    return centers;
}

namespace {

double assigned_cost(std::span<const Point2> points, std::span<const Point2> centers,
                     const std::vector<std::size_t>& assignments) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) total += squared_distance(points[i], centers[assignments[i]]);
    return total;
}

/// New centers from the current partition. Empty clusters take the points farthest from their centers.
std::vector<Point2> update_centers(std::span<const Point2> points, const std::vector<std::size_t>& assignments,
                                   std::size_t k) {
    std::vector<Point2> sums(k, Point2{0.0, 0.0});
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = assignments[i];
        sums[c][0] += points[i][0];
        sums[c][1] += points[i][1];
        ++sizes[c];
    }
    std::vector<Point2> centers(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) {
            const auto n = static_cast<double>(sizes[c]);
            centers[c] = {sums[c][0] / n, sums[c][1] / n};
        }
    }
    std::vector<char> taken(points.size(), 0);
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        std::size_t far = points.size();
        double far_d = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto owner = assignments[i];
            if (taken[i] || sizes[owner] < 2 || owner == c) continue;
            const double d = squared_distance(points[i], centers[owner]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == points.size()) {
            // every point already sits on its center; nothing to split
            centers[c] = points.empty() ? Point2{0.0, 0.0} : points[0];
            continue;
        }
        taken[far] = 1;
        --sizes[assignments[far]];
        sizes[c] = 1;
        centers[c] = points[far];
    }
    return centers;
}

}  // namespace

KMeansModel lloyd_refine(std::span<const Point2> points, std::vector<Point2> centers, std::size_t max_iters,
                         double shift_tolerance) {
    KMeansModel model;
    const std::size_t k = centers.size();
    model.centers = std::move(centers);
    model.assignments = assign(points, model.centers);
    model.cost_history.push_back(assigned_cost(points, model.centers, model.assignments));

    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        auto next_centers = update_centers(points, model.assignments, k);
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(squared_distance(next_centers[c], model.centers[c])));
        }
        auto next_assign = assign(points, next_centers);
        const double next_cost = assigned_cost(points, next_centers, next_assign);
        // A rise can only come from round-off once the partition is stable.
        if (next_cost > model.cost_history.back()) break;

        const bool changed = next_assign != model.assignments;
        model.centers = std::move(next_centers);
        model.assignments = std::move(next_assign);
        model.cost_history.push_back(next_cost);
        model.iterations_run = iter;
        if (!changed || shift < shift_tolerance) break;
    }

    for (std::size_t i = 1; i < model.cost_history.size(); ++i) {
        if (model.cost_history[i] > model.cost_history[i - 1]) {
            throw InvariantError("Lloyd cost increased between iterations");
        }
    }
    return model;
}

KMeansModel lloyd_fit(std::span<const Point2> points, const KMeansConfig& config, Rng& rng) {
    config.validate();
    if (points.size() < config.k) {
        throw ConfigError("k-means: need at least k = " + std::to_string(config.k) + " points, got " +
                          std::to_string(points.size()));
    }
    std::vector<std::uint64_t> seeds(config.num_restarts);
    for (auto& s : seeds) s = rng.next();

    std::vector<KMeansModel> runs(config.num_restarts);
    parallel_for(config.num_restarts, config.num_threads, [&](std::size_t r) {
        Rng local(seeds[r]);
        auto init = config.seeding == Seeding::uniform ? seed_uniform(points, config.k, local)
                                                       : seed_dsquared(points, config.k, local);
        runs[r] = lloyd_refine(points, std::move(init), config.max_iters, config.shift_tolerance);
        runs[r].best_restart = r;
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].final_cost() < runs[best].final_cost()) best = r;
    }
    return std::move(runs[best]);
}

}  // namespace sensorassoc
