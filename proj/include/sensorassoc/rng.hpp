#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

namespace sensorassoc {

/**
 * Portable pseudo-random stream.
 *
 * The generator is xoshiro256** (Blackman & Vigna), seeded by expanding a
 * 64-bit seed through SplitMix64. Every derived quantity (uniform reals,
 * bounded integers, normals, shuffles) is computed here rather than through
 * the <random> distributions, whose output is implementation-defined, so a
 * given seed yields the same values on every platform and standard library.
 *
 * Independent streams are obtained with derive_seed(), which hashes a parent
 * seed together with a list of integer coordinates (dataset index, target
 * index, restart index, ...).
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next(); }
    std::uint64_t next();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform double in [lo, hi]; returns lo when lo == hi.
    double uniform(double lo, double hi);

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t state_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Mix a parent seed with a sequence of stream coordinates.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> coords);

}  // namespace sensorassoc
