#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace loadcast {

/// Shape or dimension disagreement between tensors/layers.
class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration value (bad sizes, rates outside range, bad split).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unusable input data (CSV schema, missing columns, bad cells).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values produced where finite ones are required.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// API misuse (calling backward without forward, empty inputs, ...).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training produced a non-finite loss; message names the epoch.
class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

inline bool is_finite(double x) { return std::isfinite(x); }

}  // namespace loadcast
