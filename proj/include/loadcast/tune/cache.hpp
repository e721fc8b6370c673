#pragma once

#include <cstdint>
#include <cstring>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "loadcast/forecast/config.hpp"

namespace loadcast::tune {

/// Fitness cache keyed on decoded hyperparameters (learning rate by bit
/// pattern, so keys equal exactly when the decoded values do). Concurrent
/// callers asking for the same key share one computation: the first inserts
/// a future and computes, the rest wait on it.
class FitnessCache {
public:
    template <typename Compute>
    double get_or_compute(const forecast::Hyperparams& hp, Compute&& compute) {
        const Key key = make_key(hp);
        std::shared_future<double> future;
        std::shared_ptr<std::promise<double>> mine;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto [it, inserted] = entries_.try_emplace(key);
            if (inserted) {
                mine = std::make_shared<std::promise<double>>();
                it->second = mine->get_future().share();
                ++misses_;
            }
            future = it->second;
        }
        if (mine) {
            try {
                mine->set_value(compute());
            } catch (...) {
                mine->set_exception(std::current_exception());
            }
        }
        return future.get();
    }

    std::size_t misses() const {
        std::lock_guard<std::mutex> lock(mu_);
        return misses_;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return entries_.size();
    }

private:
    using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>;

    static Key make_key(const forecast::Hyperparams& hp) {
        std::uint64_t lr_bits = 0;
        static_assert(sizeof lr_bits == sizeof hp.learning_rate);
        std::memcpy(&lr_bits, &hp.learning_rate, sizeof lr_bits);
        return {hp.batch_size, hp.epochs, lr_bits};
    }

    mutable std::mutex mu_;
    std::map<Key, std::shared_future<double>> entries_;
    std::size_t misses_ = 0;
};

}  // namespace loadcast::tune
