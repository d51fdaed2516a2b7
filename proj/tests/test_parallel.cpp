#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "neuroirl/experiment.hpp"
#include "neuroirl/gridworld.hpp"
#include "neuroirl/neat.hpp"
#include "neuroirl/parallel.hpp"
#include "neuroirl/solvers.hpp"

using namespace neuroirl;

TEST_CASE("worker count respects the thread cap variable") {
  unsetenv("NEURO_IRL_THREADS");
  const int unbounded = worker_count();
  CHECK(unbounded >= 1);

  setenv("NEURO_IRL_THREADS", "1", 1);
  CHECK(worker_count() == 1);

  // A cap above the hardware count never raises the worker count.
  setenv("NEURO_IRL_THREADS", "4096", 1);
  CHECK(worker_count() == unbounded);

  // Nonsense values fall back to at least one worker.
  setenv("NEURO_IRL_THREADS", "0", 1);
  CHECK(worker_count() == 1);
  setenv("NEURO_IRL_THREADS", "-3", 1);
  CHECK(worker_count() == 1);

  unsetenv("NEURO_IRL_THREADS");
}

TEST_CASE("parallel kernels reproduce the serial reference bitwise") {
  GridSpec spec;
  spec.n = 16;
  spec.determinism = 0.8;
  spec.seed = 6;
  const GridWorld world = build_gridworld(spec);
  const ValueIterationResult serial = value_iteration_serial(world);
  const ValueIterationResult parallel = value_iteration(world);
  CHECK(serial.values == parallel.values);
  CHECK(serial.q.values == parallel.q.values);
  CHECK(serial.iterations == parallel.iterations);
  CHECK(serial.residual == parallel.residual);

  InnovationRegistry registry(world.num_features);
  EvolutionParams params;
  params.pop_size = 40;
  params.seed = 21;
  const Population pop = init_population(world.num_features, params, registry);
  std::vector<double> probe(world.num_features, 0.3);
  const auto fitness = [&](const Genome& g) { return std::abs(activate(g, probe)); };
  CHECK(population_fitness(pop, fitness) == population_fitness_serial(pop, fitness));
}

TEST_CASE("experiment results do not depend on the worker count") {
  ExperimentConfig config;
  config.algorithm = Algorithm::NeatIrl;
  config.grid.n = 4;
  config.grid.determinism = 1.0;
  config.evolution.pop_size = 16;
  config.evolution.max_generations = 6;
  config.runs = 4;
  config.base_seed = 5;

  setenv("NEURO_IRL_THREADS", "1", 1);
  const ExperimentResult capped = run_experiment(config);
  unsetenv("NEURO_IRL_THREADS");
  const ExperimentResult free_run = run_experiment(config);

  CHECK(misprediction_column(capped) == misprediction_column(free_run));
  for (std::size_t i = 0; i < capped.rows.size(); ++i) {
    CHECK(capped.rows[i].seed == free_run.rows[i].seed);
    CHECK(capped.rows[i].generations_run == free_run.rows[i].generations_run);
  }
}
