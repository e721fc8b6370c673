#pragma once

#include "loadcast/evo/types.hpp"

namespace loadcast::evo {

// Generational real-coded GA: tournament selection, uniform crossover,
// per-gene Gaussian mutation scaled by each gene's range, elitism.

inline void validate_ga_config(const GAConfig& cfg) {
    if (cfg.population_size < 2) throw ConfigError("GA: population size must be >= 2");
    if (cfg.tournament_size < 1 || cfg.tournament_size > cfg.population_size)
        throw ConfigError("GA: tournament size must be in [1, population]");
    if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0)
        throw ConfigError("GA: crossover rate must be in [0, 1]");
    if (cfg.mutation_sigma < 0.0 || cfg.mutation_sigma > 1.0)
        throw ConfigError("GA: mutation sigma must be in [0, 1] (fraction of range)");
    if (cfg.elitism >= cfg.population_size)
        throw ConfigError("GA: elitism must leave room for offspring");
    if (cfg.max_evaluations && *cfg.max_evaluations < cfg.population_size)
        throw ConfigError("GA: evaluation budget below one population");
}

namespace detail {

/// Indices sorted best-first; unevaluated candidates sort last. Ties break by
/// index so the ordering is deterministic.
inline std::vector<std::size_t> rank_by_fitness(const std::vector<Candidate>& cands) {
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const bool ea = cands[a].evaluated(), eb = cands[b].evaluated();
        if (ea != eb) return ea;
        if (ea && eb && *cands[a].fitness != *cands[b].fitness)
            return *cands[a].fitness < *cands[b].fitness;
        return a < b;
    });
    return order;
}

inline const Candidate& tournament_select(const std::vector<Candidate>& cands,
                                          std::size_t rounds, SeededRng& rng) {
    const Candidate* winner = &cands[rng.index(cands.size())];
    for (std::size_t r = 1; r < rounds; ++r) {
        const Candidate& challenger = cands[rng.index(cands.size())];
        const bool challenger_wins =
            challenger.evaluated() &&
            (!winner->evaluated() || *challenger.fitness < *winner->fitness);
        if (challenger_wins) winner = &challenger;
    }
    return *winner;
}

}  // namespace detail

inline RunResult ga_run(const GAConfig& cfg, const Objective& obj) {
    validate_ga_config(cfg);
    obj.validate();
    SeededRng rng(cfg.seed);

    RunResult result;
    Population pop;
    pop.candidates.resize(cfg.population_size);
    {
        SeededRng init_rng = rng.derive(0);
        for (std::size_t i = 0; i < cfg.population_size; ++i) {
            SeededRng stream = init_rng.derive(i);
            pop.candidates[i].genome = obj.bounds.sample(stream);
        }
    }
    std::vector<Candidate*> pending;
    for (auto& c : pop.candidates) pending.push_back(&c);
    detail::evaluate_candidates(obj, pending, cfg.workers, result.evaluations,
                                result.discarded);
    detail::track_best(pop.best, pop.candidates);
    if (!pop.best.evaluated())
        throw NumericError("GA: every candidate in the initial population was discarded");
    result.history.push_back(*pop.best.fitness);
    if (cfg.target_fitness && *pop.best.fitness <= *cfg.target_fitness) {
        result.best = pop.best;
        return result;
    }

    const std::size_t offspring_count = cfg.population_size - cfg.elitism;
    for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
        if (cfg.max_evaluations && result.evaluations + offspring_count > *cfg.max_evaluations)
            break;

        const auto order = detail::rank_by_fitness(pop.candidates);
        std::vector<Candidate> next;
        next.reserve(cfg.population_size);
        for (std::size_t e = 0; e < cfg.elitism; ++e)
            next.push_back(pop.candidates[order[e]]);  // fitness carried, not re-evaluated

        SeededRng gen_rng = rng.derive(gen);
        for (std::size_t c = 0; c < offspring_count; ++c) {
            SeededRng stream = gen_rng.derive(c);
            const Candidate& p1 =
                detail::tournament_select(pop.candidates, cfg.tournament_size, stream);
            const Candidate& p2 =
                detail::tournament_select(pop.candidates, cfg.tournament_size, stream);
            Candidate child;
            if (stream.uniform() < cfg.crossover_rate) {
                child.genome.resize(p1.genome.size());
                for (std::size_t j = 0; j < child.genome.size(); ++j)
                    child.genome[j] = stream.bernoulli(0.5) ? p1.genome[j] : p2.genome[j];
            } else {
                child.genome = p1.genome;
            }
            if (cfg.mutation_sigma > 0.0) {
                for (std::size_t j = 0; j < child.genome.size(); ++j)
                    child.genome[j] +=
                        stream.normal(0.0, cfg.mutation_sigma * obj.bounds.range(j));
                obj.bounds.clamp(child.genome);
            }
            next.push_back(std::move(child));
        }

        pending.clear();
        for (std::size_t i = cfg.elitism; i < next.size(); ++i) pending.push_back(&next[i]);
        detail::evaluate_candidates(obj, pending, cfg.workers, result.evaluations,
                                    result.discarded);
        pop.candidates = std::move(next);
        pop.generation = gen;
        detail::track_best(pop.best, pop.candidates);
        result.history.push_back(*pop.best.fitness);
        if (cfg.target_fitness && *pop.best.fitness <= *cfg.target_fitness) break;
    }

    result.best = pop.best;
    return result;
}

}  // namespace loadcast::evo
