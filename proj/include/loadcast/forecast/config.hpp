#pragma once

#include <cstddef>
#include <string>

#include "loadcast/common.hpp"

namespace loadcast::forecast {

/// Network shape. Defaults give the 36-node input (3 steps x 12 features)
/// and 24-node output layout with 8 heads of width 64.
struct ModelConfig {
    std::size_t lookback_steps = 3;
    std::size_t feature_count = 12;
    std::size_t td_dense_units = 64;
    std::size_t heads = 8;
    std::size_t head_dim = 64;
    double attn_dropout = 0.1;
    std::size_t dense_units = 64;
    std::size_t dense_layers = 2;
    std::size_t horizon = 24;
    bool residual = false;

    void validate() const {
        if (lookback_steps == 0 || feature_count == 0 || td_dense_units == 0 || heads == 0 ||
            head_dim == 0 || dense_units == 0 || dense_layers == 0 || horizon == 0)
            throw ConfigError("model config: all dimensions must be positive");
        if (!(attn_dropout >= 0.0 && attn_dropout < 1.0))
            throw ConfigError("model config: attn_dropout must be in [0, 1)");
    }

    std::size_t input_nodes() const { return lookback_steps * feature_count; }
    std::size_t flat_width() const { return lookback_steps * td_dense_units; }
};

/// The three tuned training knobs.
struct Hyperparams {
    std::size_t batch_size = 32;
    std::size_t epochs = 10;
    double learning_rate = 1e-3;

    void validate() const {
        if (batch_size == 0) throw ConfigError("hyperparams: batch_size must be >= 1");
        if (epochs == 0) throw ConfigError("hyperparams: epochs must be >= 1");
        if (!(learning_rate > 0.0)) throw ConfigError("hyperparams: learning_rate must be > 0");
    }
};

}  // namespace loadcast::forecast
