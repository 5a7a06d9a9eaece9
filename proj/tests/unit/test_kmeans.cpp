#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "../oracles.hpp"
#include "sensorassoc/errors.hpp"
#include "sensorassoc/kmeans.hpp"
#include "sensorassoc/rng.hpp"

using namespace sensorassoc;

namespace {

std::vector<Point2> random_cloud(Rng& rng, std::size_t n) {
    std::vector<Point2> pts(n);
    for (auto& p : pts) p = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
    return pts;
}

double sum_sq(const std::vector<Point2>& pts, const Point2& c) {
    double s = 0;
    for (const auto& p : pts) s += squared_distance(p, c);
    return s;
}

}  // namespace

TEST_CASE("centroid") {
    const std::vector<Point2> one{{1, 1}};
    CHECK(centroid(one) == Point2{1, 1});
    const std::vector<Point2> tri{{0, 0}, {2, 0}, {1, 3}};
    CHECK(centroid(tri) == Point2{1, 1});
    CHECK_THROWS(centroid(std::vector<Point2>{}));

    Rng rng(3);
    const auto pts = random_cloud(rng, 25);
    const Point2 c = centroid(pts);
    const double best = sum_sq(pts, c);
    for (int i = 0; i < 10000; ++i) {
        const Point2 q{c[0] + rng.uniform(-0.5, 0.5), c[1] + rng.uniform(-0.5, 0.5)};
        REQUIRE(sum_sq(pts, q) >= best);
    }
}

TEST_CASE("cost") {
    const std::vector<Point2> pts{{0, 0}, {2, 0}};
    CHECK(cost(pts, pts) == 0.0);
    CHECK(cost(pts, std::vector<Point2>{{0, 0}}) == 4.0);

    Rng rng(8);
    for (int k = 0; k < 50; ++k) {
        const auto x = random_cloud(rng, 30);
        const auto c = random_cloud(rng, 1 + rng.below(5));
        double ref = 0;
        for (const auto& p : x) {
            double m = INFINITY;
            for (const auto& q : c) m = std::min(m, squared_distance(p, q));
            ref += m;
        }
        CHECK(cost(x, c) == doctest::Approx(ref));
    }
}

TEST_CASE("assign") {
    const std::vector<Point2> centers{{-1, 0}, {1, 0}};
    CHECK(nearest_center({0, 0}, centers) == 0);
    CHECK(nearest_center({0.5, 0}, centers) == 1);
    const std::vector<Point2> one{{7, 7}};
    const std::vector<Point2> pts{{0, 0}, {9, -3}, {2, 2}};
    for (auto a : assign(pts, one)) CHECK(a == 0);

    Rng rng(4);
    const auto x = random_cloud(rng, 200);
    const auto c = random_cloud(rng, 6);
    const auto a = assign(x, c);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) REQUIRE(squared_distance(x[i], c[a[i]]) <= squared_distance(x[i], c[j]));
    }
}

TEST_CASE("seed_uniform") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    Rng rng(1);
    auto c = seed_uniform(pts, 4, rng);
    std::sort(c.begin(), c.end());
    CHECK(c == pts);

    Rng a(6), b(6);
    CHECK(seed_uniform(pts, 2, a) == seed_uniform(pts, 2, b));

    const std::vector<Point2> dup{{0, 0}, {0, 0}, {1, 1}};
    CHECK_THROWS_AS(seed_uniform(dup, 3, rng), ConfigError);
    const auto two = seed_uniform(dup, 2, rng);
    CHECK(two[0] != two[1]);
}

TEST_CASE("seed_uniform frequencies") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    Rng rng(21);
    std::map<double, int> counts;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[seed_uniform(pts, 1, rng)[0][0]];
    const double expected = n / 5.0;
    const double sd = std::sqrt(n * 0.2 * 0.8);
    for (const auto& [x, k] : counts) CHECK(std::abs(k - expected) < 3 * sd);
    CHECK(counts.size() == 5);
}

TEST_CASE("seed_dsquared") {
    const std::vector<Point2> line{{0, 0}, {1, 0}, {10, 0}};
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const auto c = seed_dsquared(line, 3, rng);
        REQUIRE(std::set<Point2>(c.begin(), c.end()).size() == 3);
    }
    // k = 1 picks uniformly
    std::map<double, int> first;
    for (int i = 0; i < 30000; ++i) ++first[seed_dsquared(line, 1, rng)[0][0]];
    for (const auto& [x, k] : first) CHECK(std::abs(k - 10000) < 3 * std::sqrt(30000 * (2.0 / 9)));

    // falls back to unchosen distinct points when every remaining distance is zero
    const std::vector<Point2> dup{{0, 0}, {0, 0}, {5, 5}};
    const auto c = seed_dsquared(dup, 2, rng);
    CHECK(c[0] != c[1]);
    CHECK_THROWS_AS(seed_dsquared(dup, 3, rng), ConfigError);
}

TEST_CASE("lloyd_fit on separated blobs") {
    std::vector<Point2> pts;
    const std::vector<Point2> means{{0, 0}, {100, 0}, {0, 100}};
    Rng rng(5);
    for (const auto& m : means) {
        for (int i = 0; i < 20; ++i) pts.push_back({m[0] + rng.uniform(-1, 1), m[1] + rng.uniform(-1, 1)});
    }
    for (auto seeding : {Seeding::uniform, Seeding::dsquared}) {
        Rng fit(9);
        const auto model = lloyd_fit(pts, KMeansConfig::defaults(3, seeding), fit);
        REQUIRE(model.centers.size() == 3);
        for (const auto& m : means) {
            double best = INFINITY;
            for (const auto& c : model.centers) best = std::min(best, squared_distance(c, m));
            CHECK(best < 1.0);
        }
        // each center is the centroid of its points
        for (std::size_t k = 0; k < 3; ++k) {
            std::vector<Point2> mine;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (model.assignments[i] == k) mine.push_back(pts[i]);
            }
            const auto c = centroid(mine);
            CHECK(squared_distance(c, model.centers[k]) < 1e-12);
        }
    }

    std::vector<Point2> singletons{{0, 0}, {10, 0}, {0, 10}};
    Rng fit(1);
    CHECK(lloyd_fit(singletons, KMeansConfig::defaults(3, Seeding::dsquared), fit).final_cost() == 0.0);
}

TEST_CASE("lloyd_fit determinism, monotone cost and restarts") {
    Rng data(10);
    const auto pts = random_cloud(data, 120);
    auto cfg = KMeansConfig::defaults(6, Seeding::uniform);
    Rng a(77), b(77);
    const auto m1 = lloyd_fit(pts, cfg, a);
    const auto m2 = lloyd_fit(pts, cfg, b);
    CHECK(m1.centers == m2.centers);
    CHECK(m1.assignments == m2.assignments);
    CHECK(m1.cost_history == m2.cost_history);
    for (std::size_t i = 1; i < m1.cost_history.size(); ++i) CHECK(m1.cost_history[i] <= m1.cost_history[i - 1]);

    cfg.num_threads = 4;
    Rng c(77);
    const auto m3 = lloyd_fit(pts, cfg, c);
    CHECK(m3.centers == m1.centers);
    CHECK(m3.best_restart == m1.best_restart);

    // best of ten is never worse than the first restart alone
    auto single = cfg;
    single.num_restarts = 1;
    Rng d(77);
    CHECK(m1.final_cost() <= lloyd_fit(pts, single, d).final_cost() + 1e-12);
}

TEST_CASE("lloyd_fit matches exhaustive 2-partition optimum") {
    Rng rng(12);
    int good = 0;
    for (int k = 0; k < 100; ++k) {
        const auto pts = random_cloud(rng, 3 + rng.below(6));
        Rng fit(rng.next());
        const auto model = lloyd_fit(pts, KMeansConfig::defaults(2, Seeding::uniform), fit);
        const double opt = oracle::best_two_partition_cost(pts);
        REQUIRE(model.final_cost() >= opt - 1e-9);
        good += model.final_cost() <= 1.0001 * opt ? 1 : 0;
    }
    CHECK(good >= 95);
}

TEST_CASE("empty clusters are repaired") {
    // Start two of three centers far away so they capture nothing.
    const std::vector<Point2> pts{{0, 0}, {0.1, 0}, {5, 0}, {5.1, 0}, {10, 0}, {10.1, 0}};
    const auto model = lloyd_refine(pts, {{0, 0}, {1000, 1000}, {-1000, 1000}}, 100, 1e-9);
    std::set<std::size_t> used(model.assignments.begin(), model.assignments.end());
    CHECK(used.size() == 3);
    for (std::size_t i = 1; i < model.cost_history.size(); ++i) CHECK(model.cost_history[i] <= model.cost_history[i - 1]);
}

TEST_CASE("config validation") {
    KMeansConfig cfg;
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = KMeansConfig{};
    cfg.num_restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK(KMeansConfig::defaults(10, Seeding::uniform).num_restarts == 10);
    CHECK(KMeansConfig::defaults(10, Seeding::dsquared).num_restarts == 1);
    const std::vector<Point2> pts{{0, 0}};
    Rng rng(1);
    CHECK_THROWS_AS(lloyd_fit(pts, KMeansConfig::defaults(2, Seeding::uniform), rng), ConfigError);
}
