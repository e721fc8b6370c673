#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/rng.hpp"

namespace loadcast::evo {

/// Per-dimension box constraints.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    Bounds() = default;
    Bounds(std::vector<double> lo, std::vector<double> hi)
        : lower(std::move(lo)), upper(std::move(hi)) {}

    /// Same [lo, hi] in every dimension.
    static Bounds uniform(std::size_t dim, double lo, double hi) {
        return Bounds(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
    }

    std::size_t dim() const { return lower.size(); }

    void validate() const {
        if (lower.empty() || lower.size() != upper.size())
            throw ConfigError("bounds: need matching non-empty lower/upper");
        for (std::size_t j = 0; j < lower.size(); ++j)
            if (!(lower[j] < upper[j]))
                throw ConfigError("bounds: lower must be < upper in every dimension");
    }

    double range(std::size_t j) const { return upper[j] - lower[j]; }

    void clamp(std::vector<double>& genome) const {
        for (std::size_t j = 0; j < genome.size(); ++j)
            genome[j] = std::clamp(genome[j], lower[j], upper[j]);
    }

    bool contains(const std::vector<double>& genome) const {
        if (genome.size() != dim()) return false;
        for (std::size_t j = 0; j < genome.size(); ++j)
            if (genome[j] < lower[j] || genome[j] > upper[j]) return false;
        return true;
    }

    std::vector<double> sample(SeededRng& rng) const {
        std::vector<double> g(dim());
        for (std::size_t j = 0; j < g.size(); ++j) g[j] = rng.uniform(lower[j], upper[j]);
        return g;
    }
};

/// Genome plus its fitness; nullopt marks an unevaluated (or discarded) value.
struct Candidate {
    std::vector<double> genome;
    std::optional<double> fitness;

    bool evaluated() const { return fitness.has_value(); }
};

struct Population {
    std::size_t generation = 0;
    std::vector<Candidate> candidates;
    Candidate best;  // best-so-far over everything ever evaluated

    std::size_t size() const { return candidates.size(); }
};

/// Black-box minimization target. eval must be deterministic in the genome
/// (any stochastic parts seeded internally) and should return a finite cost;
/// non-finite returns mark the candidate as discarded.
struct Objective {
    std::size_t dimension = 0;
    Bounds bounds;
    std::function<double(const std::vector<double>&)> eval;

    void validate() const {
        if (dimension == 0) throw ConfigError("objective: dimension must be >= 1");
        bounds.validate();
        if (bounds.dim() != dimension) throw ConfigError("objective: bounds dimension mismatch");
        if (!eval) throw ConfigError("objective: missing evaluation function");
    }
};

struct DEConfig {
    std::size_t population_size = 30;
    double scale_factor = 0.8;   // F, legal range [0, 2]
    double crossover_rate = 0.9; // CR in [0, 1]
    std::size_t max_generations = 200;
    std::optional<double> target_fitness;
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_evaluations;
    std::size_t workers = 1;
};

struct GAConfig {
    std::size_t population_size = 30;
    std::size_t tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_sigma = 0.02;  // stddev as fraction of each gene's range
    std::size_t elitism = 1;
    std::size_t max_generations = 200;
    std::optional<double> target_fitness;
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_evaluations;
    std::size_t workers = 1;
};

struct PSOConfig {
    std::size_t swarm_size = 30;
    double inertia = 0.7;
    double cognitive = 1.5;  // c1
    double social = 1.5;     // c2
    double velocity_clamp = 0.5;  // max |v| as fraction of each gene's range
    std::size_t max_iterations = 200;
    std::optional<double> target_fitness;
    std::uint64_t seed = 0;
    std::optional<std::size_t> max_evaluations;
    std::size_t workers = 1;
};

/// Outcome of one optimizer run.
struct RunResult {
    Candidate best;
    std::vector<double> history;  // best-so-far fitness after each generation
    std::size_t evaluations = 0;  // objective calls made
    std::size_t discarded = 0;    // evaluations that returned non-finite cost
};

namespace detail {

/// Evaluates the given candidates, optionally across threads. Results land by
/// index, so the outcome is independent of scheduling. Non-finite costs leave
/// fitness unset and bump `discarded`.
inline void evaluate_candidates(const Objective& obj, std::vector<Candidate*>& pending,
                                std::size_t workers, std::size_t& evaluations,
                                std::size_t& discarded) {
    const auto eval_one = [&obj](Candidate& c) {
        const double f = obj.eval(c.genome);
        if (is_finite(f))
            c.fitness = f;
        else
            c.fitness.reset();
    };
    if (workers <= 1 || pending.size() <= 1) {
        for (Candidate* c : pending) eval_one(*c);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        const std::size_t n_threads = std::min(workers, pending.size());
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            threads.emplace_back([&]() {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= pending.size()) return;
                    try {
                        eval_one(*pending[i]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : threads) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    evaluations += pending.size();
    for (const Candidate* c : pending)
        if (!c->evaluated()) ++discarded;
}

/// Updates best-so-far from freshly evaluated candidates.
inline void track_best(Candidate& best, const std::vector<Candidate>& candidates) {
    for (const auto& c : candidates) {
        if (!c.evaluated()) continue;
        if (!best.evaluated() || *c.fitness < *best.fitness) best = c;
    }
}

}  // namespace detail

}  // namespace loadcast::evo
