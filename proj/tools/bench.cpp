// Compares the OpenMP kernels against their serial reference twins: same
// outputs, different wall clock. Exits nonzero if any pair ever disagrees.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "neuroirl/demos.hpp"
#include "neuroirl/gridworld.hpp"
#include "neuroirl/neat.hpp"
#include "neuroirl/neat_irl.hpp"
#include "neuroirl/parallel.hpp"
#include "neuroirl/solvers.hpp"

using namespace neuroirl;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-20s %10.3f ms %10.3f ms %7.2fx  %s\n", kernel, serial_ms,
              parallel_ms, serial_ms / parallel_ms, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 5;
  std::printf("workers: %d, reps: %d\n", worker_count(), reps);
  std::printf("%-20s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

  bool all_same = true;

  {
    GridSpec spec;
    spec.n = 64;
    spec.determinism = 0.7;
    spec.seed = 7;
    const GridWorld world = build_gridworld(spec);
    const auto serial = value_iteration_serial(world);
    const auto parallel = value_iteration(world);
    const bool same = serial.values == parallel.values &&
                      serial.q.values == parallel.q.values &&
                      serial.iterations == parallel.iterations;
    all_same = all_same && same;
    const double s = time_ms([&] { value_iteration_serial(world); }, reps);
    const double p = time_ms([&] { value_iteration(world); }, reps);
    report("value_iteration", s, p, same);
  }

  {
    GridSpec spec;
    spec.n = 16;
    spec.determinism = 1.0;
    spec.seed = 11;
    const GridWorld world = build_gridworld(spec);
    const Policy expert = extract_greedy_policy(value_iteration(world).q);
    const Demonstration demo = sample_demonstrations(world, expert, 8, 4, 13);
    const DemoIndex index = DemoIndex::from(demo);

    EvolutionParams params;
    params.pop_size = 256;
    params.seed = 17;
    InnovationRegistry registry(world.num_features);
    Population pop = init_population(world.num_features, params, registry);
    // A few generations so genomes differ structurally.
    for (int g = 0; g < 3; ++g) {
      const auto fitnesses = population_fitness_serial(
          pop, [&](const Genome& genome) { return genome_fitness(genome, world, index); });
      pop = evolve_generation(pop, fitnesses, params, registry, g);
    }

    const auto fitness = [&](const Genome& genome) {
      return genome_fitness(genome, world, index);
    };
    const auto serial = population_fitness_serial(pop, fitness);
    const auto parallel = population_fitness(pop, fitness);
    const bool same = serial == parallel;
    all_same = all_same && same;
    const double s = time_ms([&] { population_fitness_serial(pop, fitness); }, reps);
    const double p = time_ms([&] { population_fitness(pop, fitness); }, reps);
    report("population_fitness", s, p, same);
  }

  if (!all_same) {
    std::fprintf(stderr, "kernel outputs diverged\n");
    return 1;
  }
  return 0;
}
