#pragma once

#include <stdexcept>
#include <string>

namespace sensorassoc {

/// Invalid scenario, road, or algorithm configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or physically invalid input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A learner could not be trained on the given samples.
class TrainingError : public DataError {
public:
    using DataError::DataError;
};

/// An internal invariant (e.g. Lloyd monotonicity) did not hold.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace sensorassoc
