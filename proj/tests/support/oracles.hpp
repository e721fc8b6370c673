// Independent reference implementations the test suite checks the library
// against. Deliberately written in the most literal style available: triple
// loops, scalar accumulation, no shared code with the headers under test
// (the seeded RNG is shared so trajectories can be compared exactly).

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "loadcast/rng.hpp"

namespace oracles {

// C = A(n x m) * B(m x p), textbook index order.
inline std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                                        std::size_t n, std::size_t m, std::size_t p) {
    std::vector<double> c(n * p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < m; ++k) sum += a[i * m + k] * b[k * p + j];
            c[i * p + j] = sum;
        }
    return c;
}

inline double scalar_mse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        sum += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    return sum / static_cast<double>(actual.size());
}

inline double scalar_mape(const std::vector<double>& actual,
                          const std::vector<double>& predicted) {
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i)
        sum += std::fabs(actual[i] - predicted[i]) / std::fabs(actual[i]);
    return 100.0 * sum / static_cast<double>(actual.size());
}

// Central difference df/dx at one coordinate of a scalar function.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 double h = 1e-4) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct RefDEResult {
    std::vector<double> best_genome;
    double best_fitness = 0.0;
    std::vector<double> history;
    std::size_t evaluations = 0;
};

// Literal DE/rand/1/bin with the library's seeding scheme: init stream is
// derive(0) with one sub-stream per member, generation g uses derive(g) with
// one sub-stream per member, each drawing r1, r2, r3 by rejection, then
// j_rand, then one uniform per gene.
inline RefDEResult reference_de(const std::function<double(const std::vector<double>&)>& fn,
                                std::size_t dim, double lo, double hi, std::size_t pop_size,
                                std::size_t generations, double scale_factor,
                                double crossover_rate, std::uint64_t seed,
                                std::optional<std::size_t> max_evaluations = {}) {
    loadcast::SeededRng rng(seed);
    std::vector<std::vector<double>> pop(pop_size, std::vector<double>(dim));
    std::vector<double> fit(pop_size);

    loadcast::SeededRng init_rng = rng.derive(0);
    for (std::size_t i = 0; i < pop_size; ++i) {
        loadcast::SeededRng stream = init_rng.derive(i);
        for (std::size_t j = 0; j < dim; ++j) pop[i][j] = stream.uniform(lo, hi);
    }

    RefDEResult out;
    std::size_t best = 0;
    for (std::size_t i = 0; i < pop_size; ++i) {
        fit[i] = fn(pop[i]);
        ++out.evaluations;
        if (fit[i] < fit[best]) best = i;
    }
    out.best_genome = pop[best];
    out.best_fitness = fit[best];
    out.history.push_back(out.best_fitness);

    for (std::size_t gen = 1; gen <= generations; ++gen) {
        if (max_evaluations && out.evaluations + pop_size > *max_evaluations) break;
        loadcast::SeededRng gen_rng = rng.derive(gen);
        std::vector<std::vector<double>> trials(pop_size);
        for (std::size_t i = 0; i < pop_size; ++i) {
            loadcast::SeededRng stream = gen_rng.derive(i);
            std::size_t r1 = stream.index(pop_size);
            while (r1 == i) r1 = stream.index(pop_size);
            std::size_t r2 = stream.index(pop_size);
            while (r2 == i || r2 == r1) r2 = stream.index(pop_size);
            std::size_t r3 = stream.index(pop_size);
            while (r3 == i || r3 == r1 || r3 == r2) r3 = stream.index(pop_size);

            std::vector<double> mutant(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                mutant[j] = pop[r1][j] + scale_factor * (pop[r2][j] - pop[r3][j]);
                if (mutant[j] < lo) mutant[j] = lo;
                if (mutant[j] > hi) mutant[j] = hi;
            }

            const std::size_t j_rand = stream.index(dim);
            trials[i] = pop[i];
            for (std::size_t j = 0; j < dim; ++j) {
                const double u = stream.uniform();
                if (u <= crossover_rate || j == j_rand) trials[i][j] = mutant[j];
            }
        }
        for (std::size_t i = 0; i < pop_size; ++i) {
            const double tf = fn(trials[i]);
            ++out.evaluations;
            if (tf <= fit[i]) {
                pop[i] = trials[i];
                fit[i] = tf;
            }
            if (tf < out.best_fitness) {
                out.best_fitness = tf;
                out.best_genome = trials[i];
            }
        }
        out.history.push_back(out.best_fitness);
    }
    return out;
}

}  // namespace oracles
