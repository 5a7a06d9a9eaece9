#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "sensorassoc/dataset_io.hpp"
#include "sensorassoc/errors.hpp"
#include "sensorassoc/experiment.hpp"
#include "sensorassoc/model_io.hpp"
#include "sensorassoc/svg_plot.hpp"

using namespace sensorassoc;
namespace fs = std::filesystem;

TEST_CASE("format_number uses nine significant digits") {
    CHECK(format_number(45.0) == "45");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(123456.789123) == "123456.789");
}

TEST_CASE("dataset CSV round trip") {
    const auto s = large_variance_scenario();
    const auto labeled = generate_labeled_dataset(s.road, s.params, 1);
    const auto text = dataset_csv(labeled);
    CHECK(text.rfind(std::string(kDatasetHeader) + "\n", 0) == 0);
    std::istringstream in(text);
    const auto back = read_dataset_csv(in, 1000.0);
    REQUIRE(back.measurements.size() == 100);
    CHECK(back.road.sensor_positions == s.road.sensor_positions);
    CHECK(back.road.length == 1000.0);
    CHECK(dataset_csv(back) == text);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(back.measurements[i].velocity == doctest::Approx(labeled.measurements[i].velocity).epsilon(1e-8));
        CHECK(back.measurements[i].target_id == labeled.measurements[i].target_id);
    }

    const auto unlabeled = strip_labels(labeled, 42, 1);
    const auto utext = dataset_csv(unlabeled);
    CHECK(utext.find(",\n") != std::string::npos);
    std::istringstream uin(utext);
    CHECK_FALSE(read_dataset_csv(uin).labeled());
}

TEST_CASE("malformed dataset CSV") {
    auto parse = [](const std::string& t) {
        std::istringstream in(t);
        return read_dataset_csv(in);
    };
    CHECK_THROWS_AS(parse(""), DataError);
    CHECK_THROWS_AS(parse("a,b,c\n"), DataError);
    const std::string h = std::string(kDatasetHeader) + "\n";
    CHECK(parse(h).measurements.empty());
    CHECK_THROWS_AS(parse(h + "1,0,30,5\n"), DataError);
    CHECK_THROWS_AS(parse(h + "1,0,fast,5,\n"), DataError);
    CHECK_THROWS_AS(parse(h + "1,0,30,5,\n1,10,30,6,\n"), DataError);
    CHECK_THROWS_AS(parse(h + "1,0,30,5,\n3,10,30,6,\n"), DataError);
    CHECK_THROWS_AS(load_dataset_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("projected CSV round trip") {
    std::vector<ProjectedPoint> pts{{2, 100, 20, 45, 50, 3}, {1, 0, 31.5, 2.25, 2.25, std::nullopt}};
    std::ostringstream out;
    write_projected_csv(out, pts);
    std::istringstream in(out.str());
    const auto back = read_projected_csv(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].projected_time == 45.0);
    CHECK(back[0].label == 3);
    CHECK_FALSE(back[1].label.has_value());
}

TEST_CASE("scenario JSON round trip and errors") {
    auto s = medium_variance_scenario();
    s.params.master_seed = 1234567890123ULL;
    const auto back = parse_scenario_json(scenario_json(s));
    CHECK(back.params.name == "medium");
    CHECK(back.params.v_min == 20.0);
    CHECK(back.params.master_seed == 1234567890123ULL);
    CHECK(back.road.sensor_positions == s.road.sensor_positions);
    CHECK(scenario_json(back) == scenario_json(s));

    CHECK_THROWS_AS(parse_scenario_json("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_json(R"({"v_min": 50, "v_max": 10})"), ConfigError);
    CHECK_THROWS_AS(parse_scenario_json(R"({"road": {"length": 10, "sensor_positions": [5, 5]}})"), ConfigError);
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("atomic writes") {
    const auto dir = fs::temp_directory_path() / "sensorassoc_io_test";
    fs::remove_all(dir);
    write_file_atomic(dir / "sub" / "a.txt", "hello\n");
    CHECK(read_file(dir / "sub" / "a.txt") == "hello\n");
    write_file_atomic(dir / "sub" / "a.txt", "again\n");
    CHECK(read_file(dir / "sub" / "a.txt") == "again\n");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++entries;
    CHECK(entries == 1);
    fs::remove_all(dir);
}

TEST_CASE("model dumps are valid JSON") {
    const std::vector<Point2> x{{0, 0}, {0.2, 0.1}, {5, 5}, {5.1, 4.9}};
    const std::vector<int> y{1, 1, 2, 2};
    Rng rng(1);
    const auto k = associate_points(x, y, Algorithm::kmeanspp, 2, LearnerOptions{}, rng);
    const auto kj = nlohmann::json::parse(kmeans_model_json(*k.kmeans));
    CHECK(kj["centers"].size() == 2);
    CHECK(kj["assignments"].size() == 4);
    CHECK(kj.contains("cost_history"));

    const auto s = associate_points(x, y, Algorithm::quadratic_svm, 2, LearnerOptions{}, rng);
    const auto sj = nlohmann::json::parse(ova_model_json(*s.svm));
    CHECK(sj["kernel"]["kind"] == "quadratic");
    CHECK(sj["classes"].size() == 2);
    CHECK(sj.contains("scaling"));
}

TEST_CASE("scatter SVG") {
    PlotOptions o;
    o.title = "A & B";
    const auto empty = scatter_svg({}, o);
    CHECK(empty.find("<svg") != std::string::npos);
    CHECK(empty.find("</svg>") != std::string::npos);
    CHECK(empty.find("<circle") == std::string::npos);
    CHECK(empty.find("A &amp; B") != std::string::npos);

    const std::vector<ScatterPoint> mono{{1, 2, std::nullopt}, {3, 4, std::nullopt}};
    const auto m = scatter_svg(mono, o);
    CHECK(m.find("class=\"legend\"") == std::string::npos);
    CHECK(m.find("#444444") != std::string::npos);

    const std::vector<ScatterPoint> coloured{{1, 2, 1}, {3, 4, 2}, {2, 2, 2}};
    const auto c = scatter_svg(coloured, o);
    CHECK(c.find("Target 1") != std::string::npos);
    CHECK(c.find("Target 2") != std::string::npos);
    CHECK(c == scatter_svg(coloured, o));
}

TEST_CASE("nice_ticks and bar chart") {
    const auto unit = nice_ticks(0, 1, 5);
    REQUIRE(unit.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(unit[i] == doctest::Approx(0.2 * static_cast<double>(i)));
    const auto t = nice_ticks(3, 97);
    CHECK(t.front() >= 3);
    CHECK(t.back() <= 97);
    const auto svg = bar_chart_svg({"large", "small"}, {"Kmns", "QSVM"}, {{0.5, 0.6}, {1.0, 0.9}}, PlotOptions{});
    CHECK(svg.find("QSVM") != std::string::npos);
    CHECK(svg.find("large") != std::string::npos);
}
