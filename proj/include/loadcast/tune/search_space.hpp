#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/forecast/config.hpp"

namespace loadcast::tune {

/// The three-gene search space. Genomes live on the unit cube; decode maps
/// gene 0 to batch size, gene 1 to epochs (both linear with rounding) and
/// gene 2 to learning rate on a log scale.
struct SearchSpace {
    std::size_t batch_min = 8, batch_max = 256;
    std::size_t epochs_min = 10, epochs_max = 1000;
    double lr_min = 1e-5, lr_max = 0.5;

    static constexpr std::size_t dimension = 3;

    void validate() const {
        if (batch_min == 0 || batch_min >= batch_max)
            throw ConfigError("search space: need 0 < batch_min < batch_max");
        if (epochs_min == 0 || epochs_min >= epochs_max)
            throw ConfigError("search space: need 0 < epochs_min < epochs_max");
        if (!(lr_min > 0.0 && lr_min < lr_max))
            throw ConfigError("search space: need 0 < lr_min < lr_max");
    }
};

inline forecast::Hyperparams decode(const std::vector<double>& genome, const SearchSpace& space) {
    space.validate();
    if (genome.size() != SearchSpace::dimension)
        throw DimensionError("decode: genome has " + std::to_string(genome.size()) +
                             " genes, expected " + std::to_string(SearchSpace::dimension));
    const double g0 = std::clamp(genome[0], 0.0, 1.0);
    const double g1 = std::clamp(genome[1], 0.0, 1.0);
    const double g2 = std::clamp(genome[2], 0.0, 1.0);
    forecast::Hyperparams hp;
    hp.batch_size = static_cast<std::size_t>(std::llround(
        static_cast<double>(space.batch_min) +
        g0 * static_cast<double>(space.batch_max - space.batch_min)));
    hp.epochs = static_cast<std::size_t>(std::llround(
        static_cast<double>(space.epochs_min) +
        g1 * static_cast<double>(space.epochs_max - space.epochs_min)));
    const double log_lo = std::log10(space.lr_min);
    const double log_hi = std::log10(space.lr_max);
    hp.learning_rate = std::pow(10.0, log_lo + g2 * (log_hi - log_lo));
    return hp;
}

}  // namespace loadcast::tune
