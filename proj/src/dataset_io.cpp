#include "sensorassoc/dataset_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sensorassoc/errors.hpp"

namespace sensorassoc {

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << kDatasetHeader << '\n';
    for (const auto& m : data.measurements) {
        out << m.sensor_index << ',' << format_number(m.sensor_position) << ',' << format_number(m.velocity) << ','
            << format_number(m.timestamp) << ',';
        if (m.target_id) out << *m.target_id;
        out << '\n';
    }
}

std::string dataset_csv(const Dataset& data) {
    std::ostringstream out;
    write_dataset_csv(out, data);
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double(const std::string& text, std::size_t line_no, const char* column) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + column + " value '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& text, std::size_t line_no, const char* column) {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + column + " value '" + text + "'");
    }
    return static_cast<int>(v);
}

std::optional<int> parse_optional_int(const std::string& text, std::size_t line_no, const char* column) {
    if (text.empty()) return std::nullopt;
    return parse_int(text, line_no, column);
}

void expect_header(std::istream& in, const char* header) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw DataError("unexpected header '" + line + "', expected '" + header + "'");
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, std::optional<double> road_length) {
    expect_header(in, kDatasetHeader);
    Dataset data;
    std::map<int, double> positions;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5) throw DataError("line " + std::to_string(line_no) + ": expected 5 fields");
        Measurement m;
        m.sensor_index = parse_int(f[0], line_no, "sensor_index");
        m.sensor_position = parse_double(f[1], line_no, "sensor_position");
        m.velocity = parse_double(f[2], line_no, "velocity");
        m.timestamp = parse_double(f[3], line_no, "timestamp");
        m.target_id = parse_optional_int(f[4], line_no, "target_id");
        if (m.sensor_index < 1) throw DataError("line " + std::to_string(line_no) + ": sensor_index must be >= 1");
        auto [it, inserted] = positions.emplace(m.sensor_index, m.sensor_position);
        if (!inserted && it->second != m.sensor_position) {
            throw DataError("line " + std::to_string(line_no) + ": sensor " + std::to_string(m.sensor_index) +
                            " appears at two positions");
        }
        data.measurements.push_back(m);
    }
    if (positions.empty()) return data;

    std::vector<double> ordered;
    int expected = 1;
    for (const auto& [idx, pos] : positions) {
        if (idx != expected++) throw DataError("sensor indices must be contiguous from 1");
        ordered.push_back(pos);
    }
    const double length = road_length ? *road_length : std::nextafter(ordered.back(), INFINITY);
    try {
        data.road = build_road(length, std::move(ordered));
    } catch (const ConfigError& e) {
        throw DataError(std::string("dataset road is invalid: ") + e.what());
    }
    return data;
}

Dataset load_dataset_csv(const std::filesystem::path& path, std::optional<double> road_length) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read dataset file " + path.string());
    return read_dataset_csv(in, road_length);
}

void write_projected_csv(std::ostream& out, std::span<const ProjectedPoint> points) {
    out << kProjectedHeader << '\n';
    for (const auto& p : points) {
        out << p.sensor_index << ',' << format_number(p.sensor_position) << ',' << format_number(p.velocity) << ','
            << format_number(p.projected_time) << ',' << format_number(p.original_timestamp) << ',';
        if (p.label) out << *p.label;
        out << '\n';
    }
}

std::vector<ProjectedPoint> read_projected_csv(std::istream& in) {
    expect_header(in, kProjectedHeader);
    std::vector<ProjectedPoint> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw DataError("line " + std::to_string(line_no) + ": expected 6 fields");
        ProjectedPoint p;
        p.sensor_index = parse_int(f[0], line_no, "sensor_index");
        p.sensor_position = parse_double(f[1], line_no, "sensor_position");
        p.velocity = parse_double(f[2], line_no, "velocity");
        p.projected_time = parse_double(f[3], line_no, "projected_time");
        p.original_timestamp = parse_double(f[4], line_no, "original_timestamp");
        p.label = parse_optional_int(f[5], line_no, "label");
        out.push_back(p);
    }
    return out;
}

std::string associated_csv(const AssociatedDataset& associated) {
    Dataset flat;
    for (const auto& row : associated.rows) flat.measurements.insert(flat.measurements.end(), row.begin(), row.end());
    return dataset_csv(flat);
}

std::string scenario_json(const Scenario& scenario) {
    const auto& p = scenario.params;
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["num_targets"] = p.num_targets;
    j["v_min"] = p.v_min;
    j["v_max"] = p.v_max;
    j["t_min"] = p.t_min;
    j["t_max"] = p.t_max;
    j["sigma_v"] = p.sigma_v;
    j["num_datasets"] = p.num_datasets;
    j["master_seed"] = p.master_seed;
    j["road"] = {{"length", scenario.road.length}, {"sensor_positions", scenario.road.sensor_positions}};
    return j.dump(2) + "\n";
}

Scenario parse_scenario_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario file is not valid JSON: ") + e.what());
    }
    Scenario s;
    try {
        auto& p = s.params;
        p.name = j.value("name", p.name);
        p.num_targets = j.value("num_targets", p.num_targets);
        p.v_min = j.at("v_min").get<double>();
        p.v_max = j.at("v_max").get<double>();
        p.t_min = j.at("t_min").get<double>();
        p.t_max = j.at("t_max").get<double>();
        p.sigma_v = j.value("sigma_v", p.sigma_v);
        p.num_datasets = j.value("num_datasets", p.num_datasets);
        p.master_seed = j.value("master_seed", p.master_seed);
        const auto& road = j.at("road");
        s.road = build_road(road.at("length").get<double>(), road.at("sensor_positions").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario file: ") + e.what());
    }
    s.params.validate();
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario_json(text.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

}  // namespace sensorassoc
