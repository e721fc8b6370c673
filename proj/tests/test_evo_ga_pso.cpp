#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "loadcast/evo/benchmarks.hpp"
#include "loadcast/evo/ga.hpp"
#include "loadcast/evo/pso.hpp"
#include "loadcast/rng.hpp"

using namespace loadcast;
using evo::Bounds;
using evo::Candidate;

namespace {

evo::Objective sphere_objective(std::size_t dim) {
    evo::Objective obj;
    obj.dimension = dim;
    obj.bounds = Bounds::uniform(dim, -5.0, 5.0);
    obj.eval = evo::bench::sphere;
    return obj;
}

}  // namespace

TEST_CASE("ga config validation") {
    const evo::Objective obj = sphere_objective(3);
    evo::GAConfig cfg;
    cfg.population_size = 1;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.tournament_size = 0;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.tournament_size = cfg.population_size + 1;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.crossover_rate = 1.5;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.mutation_sigma = -0.1;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.elitism = cfg.population_size;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.max_evaluations = cfg.population_size - 1;
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), ConfigError);
}

TEST_CASE("ga ranking orders best first, unevaluated last, ties by index") {
    std::vector<Candidate> cands(5);
    cands[0].fitness = 3.0;
    cands[1].fitness = 1.0;
    // cands[2] unevaluated
    cands[3].fitness = 1.0;  // tie with 1 -> index order
    cands[4].fitness = 2.0;
    const auto order = evo::detail::rank_by_fitness(cands);
    REQUIRE(order == std::vector<std::size_t>{1, 3, 4, 0, 2});
}

TEST_CASE("ga tournament returns an evaluated candidate when one exists") {
    std::vector<Candidate> single(1);
    single[0].fitness = 5.0;
    SeededRng rng(1);
    REQUIRE(&evo::detail::tournament_select(single, 3, rng) == &single[0]);

    // With many rounds over a small population, the best member must win.
    std::vector<Candidate> cands(4);
    for (std::size_t i = 0; i < 4; ++i) cands[i].fitness = double(i + 1);
    SeededRng rng2(2);
    int best_wins = 0;
    for (int t = 0; t < 200; ++t)
        best_wins += &evo::detail::tournament_select(cands, 16, rng2) == &cands[0];
    REQUIRE(best_wins >= 195);  // missing only when all 16 draws avoid index 0
}

TEST_CASE("ga run is deterministic, feasible, and budget-bounded") {
    const evo::Objective obj = sphere_objective(4);
    evo::GAConfig cfg;
    cfg.population_size = 20;
    cfg.max_generations = 40;
    cfg.seed = 5;

    const evo::RunResult a = evo::ga_run(cfg, obj);
    const evo::RunResult b = evo::ga_run(cfg, obj);
    REQUIRE(a.history == b.history);
    REQUIRE(a.best.genome == b.best.genome);
    REQUIRE(obj.bounds.contains(a.best.genome));
    REQUIRE(a.history.size() == 41);
    REQUIRE(a.evaluations == 20 + 40 * 19);  // elitism 1 skips one re-evaluation
    for (std::size_t g = 1; g < a.history.size(); ++g)
        REQUIRE(a.history[g] <= a.history[g - 1]);

    cfg.seed = 6;
    const evo::RunResult c = evo::ga_run(cfg, obj);
    REQUIRE(a.history != c.history);

    cfg.seed = 5;
    cfg.max_evaluations = 100;
    const evo::RunResult d = evo::ga_run(cfg, obj);
    REQUIRE(d.evaluations <= 100);
    REQUIRE(d.evaluations > 100 - (cfg.population_size - cfg.elitism));
}

TEST_CASE("ga without variation operators cannot improve") {
    evo::Objective obj = sphere_objective(3);
    evo::GAConfig cfg;
    cfg.population_size = 10;
    cfg.max_generations = 15;
    cfg.crossover_rate = 0.0;
    cfg.mutation_sigma = 0.0;
    cfg.seed = 9;
    const evo::RunResult r = evo::ga_run(cfg, obj);
    for (double h : r.history) REQUIRE(h == r.history.front());
}

TEST_CASE("ga discards non-finite fitness and survives") {
    evo::Objective obj = sphere_objective(2);
    obj.eval = [](const std::vector<double>& g) {
        if (g[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return g[0] * g[0] + g[1] * g[1];
    };
    evo::GAConfig cfg;
    cfg.population_size = 16;
    cfg.max_generations = 25;
    cfg.seed = 3;
    const evo::RunResult r = evo::ga_run(cfg, obj);
    REQUIRE(r.discarded > 0);
    REQUIRE(is_finite(*r.best.fitness));

    obj.eval = [](const std::vector<double>&) {
        return std::numeric_limits<double>::quiet_NaN();
    };
    REQUIRE_THROWS_AS(evo::ga_run(cfg, obj), NumericError);
}

TEST_CASE("pso config validation") {
    const evo::Objective obj = sphere_objective(3);
    evo::PSOConfig cfg;
    cfg.swarm_size = 1;
    REQUIRE_THROWS_AS(evo::pso_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.inertia = -0.1;
    REQUIRE_THROWS_AS(evo::pso_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.velocity_clamp = 0.0;
    REQUIRE_THROWS_AS(evo::pso_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.velocity_clamp = 1.5;
    REQUIRE_THROWS_AS(evo::pso_run(cfg, obj), ConfigError);
    cfg = {};
    cfg.max_evaluations = cfg.swarm_size - 1;
    REQUIRE_THROWS_AS(evo::pso_run(cfg, obj), ConfigError);
}

TEST_CASE("pso run is deterministic, feasible, and budget-bounded") {
    const evo::Objective obj = sphere_objective(4);
    evo::PSOConfig cfg;
    cfg.swarm_size = 20;
    cfg.max_iterations = 40;
    cfg.seed = 5;

    const evo::RunResult a = evo::pso_run(cfg, obj);
    const evo::RunResult b = evo::pso_run(cfg, obj);
    REQUIRE(a.history == b.history);
    REQUIRE(a.best.genome == b.best.genome);
    REQUIRE(obj.bounds.contains(a.best.genome));
    REQUIRE(a.history.size() == 41);
    REQUIRE(a.evaluations == 20 * 41);
    for (std::size_t g = 1; g < a.history.size(); ++g)
        REQUIRE(a.history[g] <= a.history[g - 1]);

    cfg.max_evaluations = 130;
    const evo::RunResult c = evo::pso_run(cfg, obj);
    REQUIRE(c.evaluations == 120);  // 20 init + 5 whole iterations
}

TEST_CASE("pso with zero attraction never moves") {
    // Velocities start at zero; with c1 = c2 = 0 they stay zero, so fitness
    // cannot change from the initial swarm's.
    const evo::Objective obj = sphere_objective(3);
    evo::PSOConfig cfg;
    cfg.swarm_size = 10;
    cfg.max_iterations = 10;
    cfg.cognitive = 0.0;
    cfg.social = 0.0;
    cfg.seed = 7;
    const evo::RunResult r = evo::pso_run(cfg, obj);
    for (double h : r.history) REQUIRE(h == r.history.front());
}

TEST_CASE("pso positions stay in bounds under violent coefficients") {
    evo::Objective obj = sphere_objective(3);
    std::vector<std::vector<double>> seen;
    obj.eval = [&seen](const std::vector<double>& g) {
        seen.push_back(g);
        return evo::bench::sphere(g);
    };
    evo::PSOConfig cfg;
    cfg.swarm_size = 8;
    cfg.max_iterations = 20;
    cfg.cognitive = 50.0;
    cfg.social = 50.0;
    cfg.seed = 11;
    (void)evo::pso_run(cfg, obj);
    const Bounds bounds = Bounds::uniform(3, -5.0, 5.0);
    for (const auto& g : seen) REQUIRE(bounds.contains(g));
}

TEST_CASE("pso survives discarded particles") {
    evo::Objective obj = sphere_objective(2);
    obj.eval = [](const std::vector<double>& g) {
        if (g[1] > 0.0) return std::numeric_limits<double>::quiet_NaN();
        return g[0] * g[0] + g[1] * g[1];
    };
    evo::PSOConfig cfg;
    cfg.swarm_size = 12;
    cfg.max_iterations = 20;
    cfg.seed = 13;
    const evo::RunResult r = evo::pso_run(cfg, obj);
    REQUIRE(r.discarded > 0);
    REQUIRE(is_finite(*r.best.fitness));
}

TEST_CASE("benchmark functions have their known minima") {
    REQUIRE(evo::bench::sphere({0.0, 0.0, 0.0}) == 0.0);
    REQUIRE(evo::bench::sphere({1.0, 2.0}) == 5.0);
    REQUIRE(evo::bench::rastrigin({0.0, 0.0}) == 0.0);
    REQUIRE(evo::bench::rastrigin({1.0}) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(evo::bench::rosenbrock({1.0, 1.0, 1.0}) == 0.0);
    REQUIRE(evo::bench::rosenbrock({0.0, 0.0}) == 1.0);
}

TEST_CASE("benchmark suite lookup") {
    REQUIRE(evo::bench::find_suite("sphere") != nullptr);
    REQUIRE(evo::bench::find_suite("rastrigin") != nullptr);
    REQUIRE(evo::bench::find_suite("rosenbrock") != nullptr);
    REQUIRE(evo::bench::find_suite("ackley") == nullptr);
}

TEST_CASE("every optimizer clears its benchmark threshold") {
    for (const char* suite_name : {"sphere", "rastrigin", "rosenbrock"}) {
        const evo::bench::Suite* suite = evo::bench::find_suite(suite_name);
        REQUIRE(suite != nullptr);
        for (const char* algo : {"de", "ga", "pso"}) {
            const auto out = evo::bench::run_suite(*suite, algo, 1);
            INFO(suite_name << "/" << algo << " best " << out.best_fitness << " threshold "
                            << out.threshold);
            REQUIRE(out.passed);
        }
    }
}
