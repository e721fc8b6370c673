#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "loadcast/common.hpp"

namespace loadcast::metrics {

/// Below this magnitude an actual value is treated as a zero denominator for
/// MAPE. Load data is strictly positive, so tripping the guard signals data
/// corruption rather than a value to skip.
inline constexpr double kMapeDenominatorGuard = 1e-9;

struct EvalResult {
    double mse = 0.0;   // squared target units
    double mape = 0.0;  // percent
    std::size_t count = 0;
};

inline double mse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.empty()) throw UsageError("mse: empty series");
    if (actual.size() != predicted.size()) throw UsageError("mse: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        sum += d * d;
    }
    return sum / static_cast<double>(actual.size());
}

/// 100/n * sum |actual - pred| / |actual|, in percent.
inline double mape(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.empty()) throw UsageError("mape: empty series");
    if (actual.size() != predicted.size()) throw UsageError("mape: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (std::abs(actual[i]) <= kMapeDenominatorGuard)
            throw NumericError("mape: |actual| at index " + std::to_string(i) +
                               " is below the zero-denominator guard");
        sum += std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

inline EvalResult evaluate(const std::vector<double>& actual,
                           const std::vector<double>& predicted) {
    return EvalResult{mse(actual, predicted), mape(actual, predicted), actual.size()};
}

}  // namespace loadcast::metrics
