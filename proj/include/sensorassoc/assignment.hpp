#pragma once

#include <cstddef>
#include <vector>

namespace sensorassoc {

/**
 * Minimum-cost perfect assignment on a square cost matrix (Hungarian method,
 * shortest augmenting path with potentials, O(n^3)). Returns column[row].
 */
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace sensorassoc
