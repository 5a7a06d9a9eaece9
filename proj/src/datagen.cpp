#include "sensorassoc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sensorassoc/errors.hpp"

namespace sensorassoc {

RoadConfig build_road(double length, std::vector<double> sensor_positions) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw ConfigError("road length must be positive and finite");
    }
    if (sensor_positions.size() < 2) {
        throw ConfigError("a road needs at least 2 sensors");
    }
    for (std::size_t i = 0; i < sensor_positions.size(); ++i) {
        const double r = sensor_positions[i];
        if (!std::isfinite(r) || r < 0.0 || r >= length) {
            std::ostringstream msg;
            msg << "sensor " << i + 1 << " position " << r << " outside [0, " << length << ")";
            throw ConfigError(msg.str());
        }
        if (i > 0 && !(r > sensor_positions[i - 1])) {
            std::ostringstream msg;
            msg << "sensor positions must be strictly increasing (sensor " << i + 1 << " at " << r << ")";
            throw ConfigError(msg.str());
        }
    }
    return RoadConfig{length, std::move(sensor_positions)};
}

RoadConfig evenly_spaced_road(double length, double spacing, std::size_t count) {
    std::vector<double> positions(count);
    for (std::size_t i = 0; i < count; ++i) positions[i] = spacing * static_cast<double>(i);
    return build_road(length, std::move(positions));
}

void ScenarioParams::validate() const {
    auto fail = [this](const std::string& what) { throw ConfigError("scenario '" + name + "': " + what); };
    if (num_targets < 1) fail("num_targets must be >= 1");
    if (!(v_min > 0.0) || !(v_min <= v_max)) fail("need 0 < v_min <= v_max");
    if (!(t_min >= 0.0) || !(t_min <= t_max)) fail("need 0 <= t_min <= t_max");
    if (!(sigma_v >= 0.0) || !std::isfinite(sigma_v)) fail("sigma_v must be finite and >= 0");
    if (num_datasets < 1) fail("num_datasets must be >= 1");
}

RoadConfig reference_road() { return evenly_spaced_road(1000.0, 100.0, 10); }

namespace {

Scenario make_scenario(std::string name, double v_min, double v_max, double t_min, double t_max) {
    ScenarioParams p;
    p.name = std::move(name);
    p.num_targets = 10;
    p.v_min = v_min;
    p.v_max = v_max;
    p.t_min = t_min;
    p.t_max = t_max;
    p.sigma_v = 0.25;
    p.num_datasets = 20;
    return Scenario{p, reference_road()};
}

}  // namespace

Scenario large_variance_scenario() { return make_scenario("large", 30.0, 80.0, 1.0, 30.0); }
Scenario medium_variance_scenario() { return make_scenario("medium", 20.0, 50.0, 1.0, 30.0); }
Scenario small_variance_scenario() { return make_scenario("small", 20.0, 40.0, 1.0, 20.0); }

Scenario preset_scenario(const std::string& name) {
    if (name == "large") return large_variance_scenario();
    if (name == "medium") return medium_variance_scenario();
    if (name == "small") return small_variance_scenario();
    throw ConfigError("unknown preset scenario '" + name + "' (expected large, medium or small)");
}

bool Dataset::labeled() const {
    return !measurements.empty() &&
           std::all_of(measurements.begin(), measurements.end(), [](const Measurement& m) { return m.target_id.has_value(); });
}

InitialConditions sample_initial_conditions(const ScenarioParams& params, Rng& rng) {
    InitialConditions ic;
    ic.velocity = rng.uniform(params.v_min, params.v_max);
    ic.time = rng.uniform(params.t_min, params.t_max);
    return ic;
}

TargetTrajectory generate_trajectory(int target_id, InitialConditions initial, const RoadConfig& road,
                                     const ScenarioParams& params, Rng& rng) {
    const std::size_t n = road.num_sensors();
    TargetTrajectory traj;
    traj.target_id = target_id;
    traj.segment_velocities.resize(n);
    traj.pass_times.resize(n);
    traj.segment_velocities[0] = initial.velocity;
    traj.pass_times[0] = initial.time;
    for (std::size_t i = 1; i < n; ++i) {
        double v = traj.segment_velocities[i - 1];
        if (params.sigma_v > 0.0) v = std::clamp(v + rng.normal(0.0, params.sigma_v), params.v_min, params.v_max);
        traj.segment_velocities[i] = v;
        traj.pass_times[i] = traj.pass_times[i - 1] + (road.sensor_positions[i] - road.sensor_positions[i - 1]) / v;
    }
    return traj;
}

std::vector<Measurement> record_measurements(const TargetTrajectory& trajectory, const RoadConfig& road) {
    if (trajectory.segment_velocities.size() != road.num_sensors() ||
        trajectory.pass_times.size() != road.num_sensors()) {
        throw std::invalid_argument("trajectory does not match the road's sensor count");
    }
    std::vector<Measurement> out;
    out.reserve(road.num_sensors());
    for (std::size_t i = 0; i < road.num_sensors(); ++i) {
        out.push_back(Measurement{static_cast<int>(i + 1), road.sensor_positions[i], trajectory.segment_velocities[i],
                                  trajectory.pass_times[i], trajectory.target_id});
    }
    return out;
}

Dataset generate_labeled_dataset(const RoadConfig& road, const ScenarioParams& params, int dataset_index) {
    params.validate();
    if (dataset_index < 1) throw ConfigError("dataset_index is 1-based");

    const auto n_targets = static_cast<std::size_t>(params.num_targets);
    const std::size_t n_sensors = road.num_sensors();
    Dataset data;
    data.road = road;
    data.measurements.resize(n_targets * n_sensors);
    for (std::size_t a = 0; a < n_targets; ++a) {
        Rng rng(derive_seed(params.master_seed, {static_cast<std::uint64_t>(Stream::target),
                                                 static_cast<std::uint64_t>(dataset_index), a + 1}));
        const int target_id = static_cast<int>(a + 1);
        const auto initial = sample_initial_conditions(params, rng);
        const auto traj = generate_trajectory(target_id, initial, road, params, rng);
        auto rows = record_measurements(traj, road);
        for (std::size_t s = 0; s < n_sensors; ++s) data.measurements[s * n_targets + a] = rows[s];
    }
    return data;
}

Dataset shuffle_within_sensors(const Dataset& data, Rng& rng) {
    Dataset out;
    out.road = data.road;
    out.measurements.reserve(data.measurements.size());
    for (std::size_t s = 1; s <= data.road.num_sensors(); ++s) {
        std::vector<Measurement> at_sensor;
        for (const auto& m : data.measurements) {
            if (m.sensor_index == static_cast<int>(s)) at_sensor.push_back(m);
        }
        rng.shuffle(at_sensor);
        out.measurements.insert(out.measurements.end(), at_sensor.begin(), at_sensor.end());
    }
    return out;
}

Dataset strip_labels(const Dataset& labeled, Rng& rng) {
    Dataset out = shuffle_within_sensors(labeled, rng);
    for (auto& m : out.measurements) m.target_id.reset();
    return out;
}

Dataset strip_labels(const Dataset& labeled, std::uint64_t master_seed, int dataset_index) {
    Rng rng(derive_seed(master_seed, {static_cast<std::uint64_t>(Stream::shuffle), static_cast<std::uint64_t>(dataset_index)}));
    return strip_labels(labeled, rng);
}

}  // namespace sensorassoc
