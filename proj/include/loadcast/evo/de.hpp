#pragma once

#include "loadcast/evo/types.hpp"

namespace loadcast::evo {

// DE/rand/1/bin. Mutation adds the F-weighted difference of two randomly
// chosen members to a third; binomial crossover mixes mutant and target with
// one forced mutant gene; greedy selection keeps the lower cost (ties go to
// the trial).

inline void validate_de_config(const DEConfig& cfg) {
    if (cfg.population_size < 4)
        throw ConfigError("DE: population size must be >= 4 (mutation needs three "
                          "distinct non-self members)");
    if (cfg.scale_factor < 0.0 || cfg.scale_factor > 2.0)
        throw ConfigError("DE: scale factor F must be in [0, 2]");
    if (cfg.crossover_rate < 0.0 || cfg.crossover_rate > 1.0)
        throw ConfigError("DE: crossover rate CR must be in [0, 1]");
    if (cfg.max_evaluations && *cfg.max_evaluations < cfg.population_size)
        throw ConfigError("DE: evaluation budget below one population");
}

/// Uniformly initialized, unevaluated population.
inline Population de_init(const DEConfig& cfg, const Bounds& bounds, SeededRng& rng) {
    validate_de_config(cfg);
    bounds.validate();
    Population pop;
    pop.candidates.resize(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        SeededRng stream = rng.derive(i);
        pop.candidates[i].genome = bounds.sample(stream);
    }
    return pop;
}

/// v = x_r1 + F * (x_r2 - x_r3) with r1, r2, r3, i pairwise distinct.
/// Out-of-bounds genes are clamped to the violated bound.
inline std::vector<double> de_mutate(const Population& pop, std::size_t i, double scale_factor,
                                     const Bounds& bounds, SeededRng& rng) {
    const std::size_t n = pop.size();
    std::size_t r1 = rng.index(n);
    while (r1 == i) r1 = rng.index(n);
    std::size_t r2 = rng.index(n);
    while (r2 == i || r2 == r1) r2 = rng.index(n);
    std::size_t r3 = rng.index(n);
    while (r3 == i || r3 == r1 || r3 == r2) r3 = rng.index(n);

    const auto& a = pop.candidates[r1].genome;
    const auto& b = pop.candidates[r2].genome;
    const auto& c = pop.candidates[r3].genome;
    std::vector<double> mutant(a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        mutant[j] = a[j] + scale_factor * (b[j] - c[j]);
    bounds.clamp(mutant);
    return mutant;
}

/// Binomial crossover. Gene j comes from the mutant when u_j <= CR; the
/// forced index j_rand always takes the mutant gene so the trial differs
/// from the target. Draw order is fixed (j_rand first, then one uniform per
/// gene) so seeded streams can be replayed.
inline std::vector<double> de_crossover(const std::vector<double>& target,
                                        const std::vector<double>& mutant,
                                        double crossover_rate, SeededRng& rng) {
    if (target.size() != mutant.size())
        throw DimensionError("de_crossover: genome dimensions differ");
    const std::size_t j_rand = rng.index(target.size());
    std::vector<double> trial(target.size());
    for (std::size_t j = 0; j < target.size(); ++j) {
        const double u = rng.uniform();
        trial[j] = (u <= crossover_rate || j == j_rand) ? mutant[j] : target[j];
    }
    return trial;
}

/// The lower cost survives; ties favor the trial.
inline const Candidate& de_select(const Candidate& target, const Candidate& trial) {
    if (!target.evaluated() || !trial.evaluated())
        throw UsageError("de_select: both candidates must be evaluated");
    return *trial.fitness <= *target.fitness ? trial : target;
}

/// Full DE loop: init, then cycles of mutate/crossover/select until the
/// generation cap, the optional fitness target, or the evaluation budget.
inline RunResult de_run(const DEConfig& cfg, const Objective& obj) {
    validate_de_config(cfg);
    obj.validate();
    SeededRng rng(cfg.seed);

    RunResult result;
    SeededRng init_rng = rng.derive(0);
    Population pop = de_init(cfg, obj.bounds, init_rng);

    std::vector<Candidate*> pending;
    pending.reserve(pop.size());
    for (auto& c : pop.candidates) pending.push_back(&c);
    detail::evaluate_candidates(obj, pending, cfg.workers, result.evaluations,
                                result.discarded);
    detail::track_best(pop.best, pop.candidates);
    if (!pop.best.evaluated())
        throw NumericError("DE: every candidate in the initial population was discarded");
    result.history.push_back(*pop.best.fitness);
    if (cfg.target_fitness && *pop.best.fitness <= *cfg.target_fitness) {
        result.best = pop.best;
        return result;
    }

    const std::size_t n = pop.size();
    std::vector<Candidate> trials(n);
    for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
        if (cfg.max_evaluations && result.evaluations + n > *cfg.max_evaluations) break;

        SeededRng gen_rng = rng.derive(gen);
        for (std::size_t i = 0; i < n; ++i) {
            SeededRng stream = gen_rng.derive(i);
            auto mutant = de_mutate(pop, i, cfg.scale_factor, obj.bounds, stream);
            trials[i].genome =
                de_crossover(pop.candidates[i].genome, mutant, cfg.crossover_rate, stream);
            trials[i].fitness.reset();
        }

        pending.clear();
        for (auto& t : trials) pending.push_back(&t);
        detail::evaluate_candidates(obj, pending, cfg.workers, result.evaluations,
                                    result.discarded);

        for (std::size_t i = 0; i < n; ++i) {
            if (!trials[i].evaluated()) continue;  // discarded trial, target stays
            if (!pop.candidates[i].evaluated() ||
                *trials[i].fitness <= *pop.candidates[i].fitness)
                pop.candidates[i] = trials[i];
        }
        pop.generation = gen;
        detail::track_best(pop.best, pop.candidates);
        result.history.push_back(*pop.best.fitness);
        if (cfg.target_fitness && *pop.best.fitness <= *cfg.target_fitness) break;
    }

    result.best = pop.best;
    return result;
}

}  // namespace loadcast::evo
