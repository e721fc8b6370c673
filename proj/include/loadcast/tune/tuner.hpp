#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "loadcast/common.hpp"
#include "loadcast/data/pipeline.hpp"
#include "loadcast/evo/de.hpp"
#include "loadcast/evo/ga.hpp"
#include "loadcast/evo/pso.hpp"
#include "loadcast/forecast/model.hpp"
#include "loadcast/forecast/train.hpp"
#include "loadcast/metrics.hpp"
#include "loadcast/tune/cache.hpp"
#include "loadcast/tune/search_space.hpp"

namespace loadcast::tune {

/// Hyperparameters the tuner measures everything against when no search is
/// run; also the "manual selection" arm of comparisons.
inline forecast::Hyperparams manual_defaults() {
    forecast::Hyperparams hp;
    hp.batch_size = 32;
    hp.epochs = 50;
    hp.learning_rate = 0.01;
    return hp;
}

struct TuneOptions {
    std::string algorithm = "de";  // de | ga | pso | random | manual
    SearchSpace space;
    forecast::ModelConfig model;
    std::size_t budget = 60;
    std::uint64_t seed = 0;
    std::optional<std::size_t> epoch_cap;  // caps every training in the run
    std::optional<std::size_t> population; // default: max(4, budget/6), at most 30
    std::size_t workers = 1;
    // Test-side instrumentation: incremented once per test-set evaluation.
    std::size_t* test_access_counter = nullptr;
};

struct TuneReport {
    std::string algorithm;
    forecast::Hyperparams best;
    double best_val_mse = 0.0;  // fitness, standardized units
    double test_mse_mw = 0.0;   // MW^2, after inverse transform
    double test_mape_percent = 0.0;
    std::vector<double> history;  // best-so-far fitness per generation
    std::size_t evaluations = 0;  // objective calls consumed from the budget
    std::size_t trainings = 0;    // cache misses, actual model fits
    std::size_t discarded = 0;    // diverged candidates
    std::size_t population = 0;
    std::uint64_t seed = 0;
    std::uint64_t model_seed = 0;
    std::optional<std::size_t> epoch_cap;
    double wall_seconds = 0.0;
};

inline std::string algorithm_display_name(const std::string& algo) {
    if (algo == "de") return "Differential Evolution";
    if (algo == "ga") return "Genetic Algorithm";
    if (algo == "pso") return "Particle Swarm";
    if (algo == "random") return "Random Search";
    if (algo == "manual") return "Manual Selection";
    return algo;
}

inline forecast::Hyperparams apply_epoch_cap(forecast::Hyperparams hp,
                                             const std::optional<std::size_t>& cap) {
    if (cap && hp.epochs > *cap) hp.epochs = *cap;
    return hp;
}

/// Trains a fresh seeded model with hp and returns the final-epoch
/// validation MSE; a diverged run yields NaN so the optimizer discards the
/// candidate instead of crashing.
inline double evaluate_candidate(const forecast::Hyperparams& hp, const data::PreparedData& d,
                                 const forecast::ModelConfig& mc, std::uint64_t model_seed,
                                 const std::optional<std::size_t>& epoch_cap) {
    const forecast::Hyperparams capped = apply_epoch_cap(hp, epoch_cap);
    capped.validate();
    const SeededRng root(model_seed);
    try {
        forecast::ForecastModel model = forecast::build_model(mc, root.derive(1).seed());
        const forecast::TrainReport report =
            forecast::fit(model, d.train, d.val, capped, root.derive(2).seed());
        return report.val_loss.back();
    } catch (const DivergenceError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

namespace detail {

inline std::size_t default_population(std::size_t budget) {
    return std::min<std::size_t>(30, std::max<std::size_t>(4, budget / 6));
}

/// Random-search control arm: budget independent uniform samples, history
/// tracks the running best after each one.
inline evo::RunResult random_search(const evo::Objective& obj, std::size_t budget,
                                    std::uint64_t seed) {
    obj.validate();
    SeededRng rng = SeededRng(seed).derive(0);
    evo::RunResult result;
    for (std::size_t i = 0; i < budget; ++i) {
        evo::Candidate c;
        c.genome = obj.bounds.sample(rng);
        const double f = obj.eval(c.genome);
        ++result.evaluations;
        if (is_finite(f)) {
            c.fitness = f;
            if (!result.best.evaluated() || f < *result.best.fitness) result.best = c;
        } else {
            ++result.discarded;
        }
        if (result.best.evaluated()) result.history.push_back(*result.best.fitness);
    }
    if (!result.best.evaluated())
        throw NumericError("random search: every sampled candidate diverged");
    return result;
}

}  // namespace detail

/// Runs the chosen algorithm against validation-MSE fitness, then retrains
/// the best hyperparameters on train+val and scores the test set exactly
/// once, in MW units.
inline TuneReport tune(const TuneOptions& opts, const data::PreparedData& d) {
    opts.space.validate();
    opts.model.validate();
    const auto t0 = std::chrono::steady_clock::now();

    TuneReport report;
    report.algorithm = opts.algorithm;
    report.seed = opts.seed;
    report.model_seed = SeededRng(opts.seed).derive(100).seed();
    report.epoch_cap = opts.epoch_cap;

    FitnessCache cache;
    evo::Objective obj;
    obj.dimension = SearchSpace::dimension;
    obj.bounds = evo::Bounds::uniform(SearchSpace::dimension, 0.0, 1.0);
    obj.eval = [&](const std::vector<double>& genome) {
        const forecast::Hyperparams hp = decode(genome, opts.space);
        return cache.get_or_compute(hp, [&] {
            return evaluate_candidate(hp, d, opts.model, report.model_seed, opts.epoch_cap);
        });
    };

    evo::RunResult run;
    if (opts.algorithm == "manual") {
        const forecast::Hyperparams manual_hp = manual_defaults();
        run.best.genome.clear();
        run.best.fitness = cache.get_or_compute(manual_hp, [&] {
            return evaluate_candidate(manual_hp, d, opts.model, report.model_seed,
                                      opts.epoch_cap);
        });
        if (!is_finite(*run.best.fitness))
            throw NumericError("manual baseline training diverged");
        run.evaluations = 1;
        run.history.push_back(*run.best.fitness);
        report.best = manual_defaults();
        report.population = 1;
    } else {
        const std::size_t pop = opts.population ? *opts.population
                                                : detail::default_population(opts.budget);
        if (opts.budget < pop)
            throw ConfigError("tune: budget " + std::to_string(opts.budget) +
                              " is below one generation of " + std::to_string(pop));
        // Generations stop on the evaluation budget, never on this ceiling.
        const std::size_t gen_limit = opts.budget;
        if (opts.algorithm == "de") {
            evo::DEConfig cfg;
            cfg.population_size = pop;
            cfg.max_generations = gen_limit;
            cfg.seed = opts.seed;
            cfg.max_evaluations = opts.budget;
            cfg.workers = opts.workers;
            run = evo::de_run(cfg, obj);
        } else if (opts.algorithm == "ga") {
            evo::GAConfig cfg;
            cfg.population_size = pop;
            cfg.max_generations = gen_limit;
            cfg.seed = opts.seed;
            cfg.max_evaluations = opts.budget;
            cfg.workers = opts.workers;
            run = evo::ga_run(cfg, obj);
        } else if (opts.algorithm == "pso") {
            evo::PSOConfig cfg;
            cfg.swarm_size = pop;
            cfg.max_iterations = gen_limit;
            cfg.seed = opts.seed;
            cfg.max_evaluations = opts.budget;
            cfg.workers = opts.workers;
            run = evo::pso_run(cfg, obj);
        } else if (opts.algorithm == "random") {
            run = detail::random_search(obj, opts.budget, opts.seed);
        } else {
            throw ConfigError("tune: unknown algorithm '" + opts.algorithm + "'");
        }
        report.best = decode(run.best.genome, opts.space);
        report.population = pop;
    }

    report.best_val_mse = *run.best.fitness;
    report.history = run.history;
    report.evaluations = run.evaluations;
    report.trainings = cache.misses();
    report.discarded = run.discarded;

    // Final refit on train+val with the winning hyperparameters, then the
    // single test-set evaluation.
    const forecast::Hyperparams final_hp = apply_epoch_cap(report.best, opts.epoch_cap);
    const SeededRng root(report.model_seed);
    forecast::ForecastModel model =
        forecast::build_model(opts.model, root.derive(3).seed());
    forecast::fit(model, d.trainval, d.val, final_hp, root.derive(4).seed());

    if (opts.test_access_counter) ++*opts.test_access_counter;
    const nn::Matrix pred = forecast::predict_batch(model, d.test.inputs);
    std::vector<double> pred_mw(pred.v.size()), actual_mw(pred.v.size());
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
        pred_mw[i] = d.demand_to_mw(pred.v[i]);
        actual_mw[i] = d.demand_to_mw(d.test.targets.v[i]);
    }
    const metrics::EvalResult ev = metrics::evaluate(actual_mw, pred_mw);
    report.test_mse_mw = ev.mse;
    report.test_mape_percent = ev.mape;

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace loadcast::tune
