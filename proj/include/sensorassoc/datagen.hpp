#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sensorassoc/rng.hpp"

namespace sensorassoc {

/// A one-dimensional road with sensors at strictly increasing positions in [0, length).
struct RoadConfig {
    double length = 0.0;
    std::vector<double> sensor_positions;

    std::size_t num_sensors() const { return sensor_positions.size(); }
    /// Position of a 1-based sensor index.
    double position(int sensor_index) const { return sensor_positions.at(static_cast<std::size_t>(sensor_index - 1)); }
    double reference_position() const { return sensor_positions.front(); }
};

/// Validates and builds a road. Throws ConfigError on invalid positions.
RoadConfig build_road(double length, std::vector<double> sensor_positions);

/// Sensors at 0, spacing, 2*spacing, ... for count sensors.
RoadConfig evenly_spaced_road(double length, double spacing, std::size_t count);

struct ScenarioParams {
    std::string name = "custom";
    int num_targets = 10;
    double v_min = 30.0;
    double v_max = 80.0;
    double t_min = 1.0;
    double t_max = 30.0;
    /// Standard deviation of the per-segment velocity random walk.
    double sigma_v = 0.25;
    int num_datasets = 20;
    std::uint64_t master_seed = 42;

    /// Throws ConfigError when any invariant fails.
    void validate() const;
};

struct Scenario {
    ScenarioParams params;
    RoadConfig road;
};

/// Road shared by the three reference scenarios: D = 1000, a sensor every 100 units from 0.
RoadConfig reference_road();
Scenario large_variance_scenario();
Scenario medium_variance_scenario();
Scenario small_variance_scenario();
/// Looks up "large", "medium" or "small". Throws ConfigError otherwise.
Scenario preset_scenario(const std::string& name);

struct InitialConditions {
    double velocity = 0.0;
    double time = 0.0;
};

struct TargetTrajectory {
    int target_id = 1;
    std::vector<double> segment_velocities;  ///< one per sensor; [0] is the initial speed
    std::vector<double> pass_times;          ///< one per sensor
};

/// One reading at a sensor. target_id is empty once labels are stripped.
struct Measurement {
    int sensor_index = 1;  ///< 1-based
    double sensor_position = 0.0;
    double velocity = 0.0;
    double timestamp = 0.0;
    std::optional<int> target_id;
};

struct Dataset {
    RoadConfig road;
    std::vector<Measurement> measurements;

    bool labeled() const;
};

InitialConditions sample_initial_conditions(const ScenarioParams& params, Rng& rng);

/**
 * Velocity profile g(v0, t0): a Gaussian random walk on the segment speed,
 * clamped to [v_min, v_max]. The speed measured at sensor n is the speed in
 * force over the segment (n-1, n], and pass times integrate those speeds.
 */
TargetTrajectory generate_trajectory(int target_id, InitialConditions initial, const RoadConfig& road,
                                     const ScenarioParams& params, Rng& rng);

std::vector<Measurement> record_measurements(const TargetTrajectory& trajectory, const RoadConfig& road);

/// Stream identifiers mixed into derive_seed() for each consumer of randomness.
enum class Stream : std::uint64_t { target = 1, shuffle = 2, learner = 3, cross_validation = 4 };

/**
 * One labeled dataset (1-based dataset_index). Each target draws from its own
 * stream derived from (master_seed, dataset_index, target), so the dataset is
 * a pure function of its arguments. Measurements are ordered sensor-major,
 * then by target id.
 */
Dataset generate_labeled_dataset(const RoadConfig& road, const ScenarioParams& params, int dataset_index);

/// Shuffles measurements within each sensor, keeping labels. Sensor blocks stay in sensor order.
Dataset shuffle_within_sensors(const Dataset& data, Rng& rng);

/// Hides target ids after shuffle_within_sensors() with the same stream.
Dataset strip_labels(const Dataset& labeled, Rng& rng);

/// strip_labels with the shuffle stream of (master_seed, dataset_index).
Dataset strip_labels(const Dataset& labeled, std::uint64_t master_seed, int dataset_index);

}  // namespace sensorassoc
