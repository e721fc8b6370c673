#pragma once

#include <cmath>
#include <string>

#include "loadcast/evo/de.hpp"
#include "loadcast/evo/ga.hpp"
#include "loadcast/evo/pso.hpp"

namespace loadcast::evo::bench {

inline double sphere(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double rastrigin(const std::vector<double>& x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * M_PI * v);
    return s;
}

inline double rosenbrock(const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

/// Analytic suite settings shared by the bench CLI command and the test
/// harness. Thresholds are pass bars verified against reference runs with
/// the same settings.
struct Suite {
    std::string name;
    std::size_t dimension;
    double lo, hi;
    std::size_t population;
    std::size_t generations;
    double threshold_de;
    double threshold_ga;
    double threshold_pso;
    double (*fn)(const std::vector<double>&);
};

inline const Suite* find_suite(const std::string& name) {
    // Sphere bars and the rastrigin DE bar are contract values; the rest
    // were frozen from worst-of-10 seeded reference runs with margin.
    static const Suite suites[] = {
        {"sphere", 5, -5.0, 5.0, 30, 200, 1e-3, 1e-1, 1e-2, &sphere},
        {"rastrigin", 3, -5.12, 5.12, 40, 300, 1e-1, 3.0, 2.0, &rastrigin},
        {"rosenbrock", 5, -5.0, 5.0, 40, 400, 1.0, 10.0, 1.0, &rosenbrock},
    };
    for (const auto& s : suites)
        if (s.name == name) return &s;
    return nullptr;
}

inline Objective make_objective(const Suite& suite) {
    Objective obj;
    obj.dimension = suite.dimension;
    obj.bounds = Bounds::uniform(suite.dimension, suite.lo, suite.hi);
    obj.eval = [fn = suite.fn](const std::vector<double>& g) { return fn(g); };
    return obj;
}

struct BenchOutcome {
    double best_fitness = 0.0;
    double threshold = 0.0;
    bool passed = false;
    std::size_t evaluations = 0;
};

/// Runs one algorithm on one suite with the suite's settings.
inline BenchOutcome run_suite(const Suite& suite, const std::string& algo, std::uint64_t seed) {
    const Objective obj = make_objective(suite);
    RunResult result;
    double threshold = 0.0;
    if (algo == "de") {
        DEConfig cfg;
        cfg.population_size = suite.population;
        cfg.max_generations = suite.generations;
        cfg.seed = seed;
        result = de_run(cfg, obj);
        threshold = suite.threshold_de;
    } else if (algo == "ga") {
        GAConfig cfg;
        cfg.population_size = suite.population;
        cfg.max_generations = suite.generations;
        cfg.seed = seed;
        result = ga_run(cfg, obj);
        threshold = suite.threshold_ga;
    } else if (algo == "pso") {
        PSOConfig cfg;
        cfg.swarm_size = suite.population;
        cfg.max_iterations = suite.generations;
        cfg.seed = seed;
        result = pso_run(cfg, obj);
        threshold = suite.threshold_pso;
    } else {
        throw ConfigError("bench: unknown algorithm '" + algo + "'");
    }
    BenchOutcome out;
    out.best_fitness = *result.best.fitness;
    out.threshold = threshold;
    out.passed = out.best_fitness <= threshold;
    out.evaluations = result.evaluations;
    return out;
}

}  // namespace loadcast::evo::bench
