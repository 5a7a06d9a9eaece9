#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sensorassoc/datagen.hpp"
#include "sensorassoc/eval.hpp"
#include "sensorassoc/experiment.hpp"

namespace sensorassoc {

inline constexpr const char* kToolVersion = "0.3.0";

/// The large, medium and small scenarios with master seeds derived from seed.
std::vector<Scenario> reference_scenarios(std::uint64_t seed);

struct ReproduceOptions {
    std::filesystem::path out_dir = "reproduce_out";
    std::uint64_t seed = 42;
    int num_datasets = 20;
    std::size_t num_threads = 0;
    /// Extra LSVM/QSVM runs at each of these penalties; the main grid uses C = 1.
    std::vector<double> c_sweep{0.1, 1.0, 10.0};
};

struct ReproduceResult {
    std::vector<AccuracyReport> reports;   ///< scenario x {Kmns, Kmns++, LSVM, QSVM}
    std::vector<AccuracyReport> ablation;  ///< Kmns++ on raw (timestamp, velocity), one per scenario
    std::vector<AccuracyReport> c_sweep;
    std::string comparison_table;
    std::vector<std::filesystem::path> files;  ///< every file written, relative to out_dir
};

/// CSV with header scenario,algorithm,dataset_index,accuracy.
std::string report_csv(std::span<const AccuracyReport> reports);
/// Scenario-by-algorithm table of mean accuracies.
std::string comparison_table(std::span<const AccuracyReport> reports);

/**
 * Runs the full comparison grid plus the no-preprocessing ablation and the
 * C sweep, and writes report.csv, summary.json, comparison.txt,
 * manifest.json and the SVG figures under out_dir. Output bytes depend only
 * on the options.
 */
ReproduceResult run_reproduce(const ReproduceOptions& options);

}  // namespace sensorassoc
