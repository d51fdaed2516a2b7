#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "neuroirl/demos.hpp"
#include "neuroirl/gridworld.hpp"
#include "neuroirl/neat.hpp"
#include "neuroirl/solvers.hpp"

namespace neuroirl {

// Agreement of a generated action with the demonstrated one: 1 when equal,
// -1 when exactly opposite, 0 otherwise (including Nothing against any
// movement, in either direction).
int coherence(Action generated, Action demonstrated);

// Greedy one-step policy from per-state values: each action scores the
// value of its intended (d=1) successor, so an off-grid move scores the
// current state. Ties break Up < Down < Left < Right < Nothing.
Policy values_to_policy(std::span<const double> values, const GridWorld& world);

// The demonstration reduced to one (state, action) pair per distinct state,
// precomputed once so fitness evaluation stays cheap.
struct DemoIndex {
  std::vector<DemoPair> pairs;

  static DemoIndex from(const Demonstration& demo);
  int size() const { return static_cast<int>(pairs.size()); }
};

// Coherence summed over the distinct demonstrated pairs, shifted by +k so
// the result is non-negative. With k pairs the range is [0, 2k]; a perfect
// match scores exactly 2k.
double coherence_fitness(const Policy& policy, const DemoIndex& demo);

// Network -> per-state values -> policy -> coherence_fitness.
double genome_fitness(const Genome& genome, const GridWorld& world,
                      const DemoIndex& demo);

struct IrlResult {
  Genome best_genome;
  ValueFunction learned_values;  // best network's output per state
  Policy learned_policy;
  int generations_run = 0;
  bool terminated_early = false;
  std::vector<double> fitness_history;
};

// The NEAT-IRL loop: evolve feature->value networks against the coherence
// fitness, stopping early once every demonstrated action is replicated.
// Deterministic per evolution.seed. Progress, when given, receives one JSON
// line per generation.
IrlResult run_neat_irl(const GridWorld& world, const Demonstration& demo,
                       const EvolutionParams& evolution,
                       std::ostream* progress = nullptr);

}  // namespace neuroirl
