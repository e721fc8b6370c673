#pragma once

#include "loadcast/evo/types.hpp"

namespace loadcast::evo {

// Canonical PSO: v <- w*v + c1*r1*(pbest - x) + c2*r2*(gbest - x), x <- x + v,
// with per-dimension random coefficients, velocity clamped to a fraction of
// each gene's range and positions clamped to the bounds.

inline void validate_pso_config(const PSOConfig& cfg) {
    if (cfg.swarm_size < 2) throw ConfigError("PSO: swarm size must be >= 2");
    if (cfg.inertia < 0.0 || cfg.cognitive < 0.0 || cfg.social < 0.0)
        throw ConfigError("PSO: coefficients must be non-negative");
    if (cfg.velocity_clamp <= 0.0 || cfg.velocity_clamp > 1.0)
        throw ConfigError("PSO: velocity clamp must be in (0, 1]");
    if (cfg.max_evaluations && *cfg.max_evaluations < cfg.swarm_size)
        throw ConfigError("PSO: evaluation budget below one swarm");
}

inline RunResult pso_run(const PSOConfig& cfg, const Objective& obj) {
    validate_pso_config(cfg);
    obj.validate();
    SeededRng rng(cfg.seed);
    const std::size_t dim = obj.dimension;

    RunResult result;
    std::vector<Candidate> particles(cfg.swarm_size);
    std::vector<std::vector<double>> velocity(cfg.swarm_size, std::vector<double>(dim, 0.0));
    {
        SeededRng init_rng = rng.derive(0);
        for (std::size_t i = 0; i < cfg.swarm_size; ++i) {
            SeededRng stream = init_rng.derive(i);
            particles[i].genome = obj.bounds.sample(stream);
        }
    }
    std::vector<Candidate*> pending;
    for (auto& p : particles) pending.push_back(&p);
    detail::evaluate_candidates(obj, pending, cfg.workers, result.evaluations,
                                result.discarded);

    std::vector<Candidate> pbest = particles;
    Candidate gbest;
    detail::track_best(gbest, particles);
    if (!gbest.evaluated())
        throw NumericError("PSO: every particle in the initial swarm was discarded");
    result.history.push_back(*gbest.fitness);
    if (cfg.target_fitness && *gbest.fitness <= *cfg.target_fitness) {
        result.best = gbest;
        return result;
    }

    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        if (cfg.max_evaluations && result.evaluations + cfg.swarm_size > *cfg.max_evaluations)
            break;

        SeededRng iter_rng = rng.derive(iter);
        for (std::size_t i = 0; i < cfg.swarm_size; ++i) {
            SeededRng stream = iter_rng.derive(i);
            auto& x = particles[i].genome;
            auto& v = velocity[i];
            // Particles whose pbest was discarded steer toward gbest only.
            const std::vector<double>& pb =
                pbest[i].evaluated() ? pbest[i].genome : gbest.genome;
            for (std::size_t j = 0; j < dim; ++j) {
                const double r1 = stream.uniform();
                const double r2 = stream.uniform();
                double vj = cfg.inertia * v[j] + cfg.cognitive * r1 * (pb[j] - x[j]) +
                            cfg.social * r2 * (gbest.genome[j] - x[j]);
                const double vmax = cfg.velocity_clamp * obj.bounds.range(j);
                vj = std::clamp(vj, -vmax, vmax);
                v[j] = vj;
                x[j] = std::clamp(x[j] + vj, obj.bounds.lower[j], obj.bounds.upper[j]);
            }
            particles[i].fitness.reset();
        }

        pending.clear();
        for (auto& p : particles) pending.push_back(&p);
        detail::evaluate_candidates(obj, pending, cfg.workers, result.evaluations,
                                    result.discarded);

        for (std::size_t i = 0; i < cfg.swarm_size; ++i) {
            if (!particles[i].evaluated()) continue;
            if (!pbest[i].evaluated() || *particles[i].fitness < *pbest[i].fitness)
                pbest[i] = particles[i];
        }
        detail::track_best(gbest, particles);
        result.history.push_back(*gbest.fitness);
        if (cfg.target_fitness && *gbest.fitness <= *cfg.target_fitness) break;
    }

    result.best = gbest;
    return result;
}

}  // namespace loadcast::evo
