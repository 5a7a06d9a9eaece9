#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/datagen.hpp"
#include "sensorassoc/preprocess.hpp"

namespace sensorassoc {

inline constexpr const char* kDatasetHeader = "sensor_index,sensor_position,velocity,timestamp,target_id";
inline constexpr const char* kProjectedHeader =
    "sensor_index,sensor_position,velocity,projected_time,original_timestamp,label";

/// Nine significant digits, the precision of every floating value in CSV output.
std::string format_number(double value);

void write_dataset_csv(std::ostream& out, const Dataset& data);
std::string dataset_csv(const Dataset& data);

/**
 * Reads a dataset CSV. The road is rebuilt from the sensor_position column;
 * files do not record the road length, so unless road_length is given it is
 * taken as the smallest value above the last sensor. Throws DataError on
 * malformed rows or inconsistent sensor positions.
 */
Dataset read_dataset_csv(std::istream& in, std::optional<double> road_length = std::nullopt);
Dataset load_dataset_csv(const std::filesystem::path& path, std::optional<double> road_length = std::nullopt);

void write_projected_csv(std::ostream& out, std::span<const ProjectedPoint> points);
std::vector<ProjectedPoint> read_projected_csv(std::istream& in);

/// Associated rows flattened row by row, in the dataset CSV schema (target_id = predicted target).
std::string associated_csv(const AssociatedDataset& associated);

/// Scenario file: ScenarioParams keys plus "road": {"length", "sensor_positions"}.
std::string scenario_json(const Scenario& scenario);
Scenario parse_scenario_json(const std::string& text);
/// Throws ConfigError if the file is missing or invalid.
Scenario load_scenario_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames it over path.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace sensorassoc
